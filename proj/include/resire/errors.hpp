#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace resire {

/// Bad input to a library call (wrong dimensions, non-finite values, out-of-range settings).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Request the selected algorithm cannot honour, e.g. a multi-axis stack handed to SIRT or FBP.
class UnsupportedConfiguration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A metric is undefined for the given data (an all-zero measured projection for the R-factor).
class UndefinedMetric : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file content. `offset` is the byte offset (or line number for text formats) at fault.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : std::runtime_error(what), offset_(offset) {}
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// The iterative solve produced non-finite values or blew up.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, int iteration)
        : std::runtime_error(what), iteration_(iteration) {}
    [[nodiscard]] int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

} // namespace resire
