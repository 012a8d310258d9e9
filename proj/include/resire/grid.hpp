#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "resire/geometry.hpp"

namespace resire {

struct Dims3 {
    int nx{1};
    int ny{1};
    int nz{1};

    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
    }
    friend bool operator==(const Dims3&, const Dims3&) = default;
};

struct Dims2 {
    int nx{1};
    int ny{1};

    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    }
    friend bool operator==(const Dims2&, const Dims2&) = default;
};

/// Index of the coordinate origin along an axis of length n.
/// Real-space origin and zero frequency both sit here.
[[nodiscard]] constexpr int center_index(int n) { return n / 2; }

/// Dense 3D array, x fastest: index = x + nx * (y + ny * z).
template <typename T>
class Array3 {
public:
    Array3() = default;
    explicit Array3(Dims3 dims, T fill = T{});
    Array3(Dims3 dims, std::vector<T> values);

    [[nodiscard]] const Dims3& dims() const { return dims_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }

    [[nodiscard]] std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims_.nx) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims_.ny) * static_cast<std::size_t>(z));
    }
    T& operator()(int x, int y, int z) { return data_[index(x, y, z)]; }
    const T& operator()(int x, int y, int z) const { return data_[index(x, y, z)]; }

    [[nodiscard]] std::span<T> values() { return data_; }
    [[nodiscard]] std::span<const T> values() const { return data_; }

    friend bool operator==(const Array3&, const Array3&) = default;

private:
    Dims3 dims_{0, 0, 0};
    std::vector<T> data_;
};

/// Dense 2D array, x fastest: index = x + nx * y.
template <typename T>
class Array2 {
public:
    Array2() = default;
    explicit Array2(Dims2 dims, T fill = T{});
    Array2(Dims2 dims, std::vector<T> values);

    [[nodiscard]] const Dims2& dims() const { return dims_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }

    [[nodiscard]] std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(x) + static_cast<std::size_t>(dims_.nx) * static_cast<std::size_t>(y);
    }
    T& operator()(int x, int y) { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const { return data_[index(x, y)]; }

    [[nodiscard]] std::span<T> values() { return data_; }
    [[nodiscard]] std::span<const T> values() const { return data_; }

    friend bool operator==(const Array2&, const Array2&) = default;

private:
    Dims2 dims_{0, 0};
    std::vector<T> data_;
};

extern template class Array3<double>;
extern template class Array3<std::complex<double>>;
extern template class Array2<double>;
extern template class Array2<std::complex<double>>;

using Volume = Array3<double>;
using Projection = Array2<double>;

/// Measured projections paired one-to-one with their orientations.
struct ProjectionStack {
    std::vector<Projection> projections;
    TiltSeries angles;

    /// Throws InvalidArgument unless there is at least one projection, counts match,
    /// every projection has the same dimensions and all values are finite.
    void validate() const;
    [[nodiscard]] std::size_t count() const { return projections.size(); }
    [[nodiscard]] Dims2 projection_dims() const { return projections.front().dims(); }
};

[[nodiscard]] bool all_finite(std::span<const double> values);
[[nodiscard]] double sum(std::span<const double> values);
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double norm2(std::span<const double> values);
[[nodiscard]] double max_abs(std::span<const double> values);

/// Padded extent for one axis: ceil(ratio * n), bumped up to the next even number.
[[nodiscard]] int oversampled_extent(int n, double ratio);

/// Zero-pads so that the origin voxel of `v` lands on the origin voxel of the result.
/// ratio == 1 on even dimensions returns an identical copy.
[[nodiscard]] Volume pad_to_oversampled(const Volume& v, double ratio);

/// Zero-pads to explicit dimensions using the same origin alignment.
[[nodiscard]] Volume pad_to(const Volume& v, Dims3 dims);

/// Centered crop, the exact inverse of pad_to_oversampled on the padded region.
[[nodiscard]] Volume crop_center(const Volume& v, Dims3 dims);
[[nodiscard]] Projection crop_center(const Projection& p, Dims2 dims);

} // namespace resire
