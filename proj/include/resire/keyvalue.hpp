#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace resire {

/// Flat "key = value" document. Blank lines and lines starting with '#' are ignored.
class KeyValueDoc {
public:
    /// Throws FormatError (offset = 1-based line number) on malformed or duplicate entries.
    static KeyValueDoc parse(std::string_view text);

    [[nodiscard]] bool contains(const std::string& key) const { return entries_.contains(key); }
    [[nodiscard]] const std::string& get(const std::string& key) const;
    [[nodiscard]] std::optional<std::string> find(const std::string& key) const;
    [[nodiscard]] const std::map<std::string, std::string>& entries() const { return entries_; }

    /// Throws FormatError naming the first key not in `allowed`.
    void require_known(const std::set<std::string>& allowed) const;

    [[nodiscard]] double get_double(const std::string& key) const;
    [[nodiscard]] long long get_int(const std::string& key) const;
    [[nodiscard]] bool get_bool(const std::string& key) const;

    void set(const std::string& key, std::string value, std::size_t line = 0);

private:
    std::map<std::string, std::string> entries_;
    std::map<std::string, std::size_t> lines_;
};

/// Strict numeric parsing of a whole token; throws InvalidArgument on trailing garbage.
[[nodiscard]] double parse_double(std::string_view text);
[[nodiscard]] long long parse_int(std::string_view text);

/// Shortest decimal representation that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

} // namespace resire
