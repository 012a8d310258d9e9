#include "resire/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resire/errors.hpp"

namespace resire {

template <typename T>
Array3<T>::Array3(Dims3 dims, T fill) : dims_(dims) {
    if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1)
        throw InvalidArgument("Array3: dimensions must be positive");
    data_.assign(dims.size(), fill);
}

template <typename T>
Array3<T>::Array3(Dims3 dims, std::vector<T> values) : dims_(dims), data_(std::move(values)) {
    if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1)
        throw InvalidArgument("Array3: dimensions must be positive");
    if (data_.size() != dims.size())
        throw InvalidArgument("Array3: value count does not match dimensions");
}

template <typename T>
Array2<T>::Array2(Dims2 dims, T fill) : dims_(dims) {
    if (dims.nx < 1 || dims.ny < 1)
        throw InvalidArgument("Array2: dimensions must be positive");
    data_.assign(dims.size(), fill);
}

template <typename T>
Array2<T>::Array2(Dims2 dims, std::vector<T> values) : dims_(dims), data_(std::move(values)) {
    if (dims.nx < 1 || dims.ny < 1)
        throw InvalidArgument("Array2: dimensions must be positive");
    if (data_.size() != dims.size())
        throw InvalidArgument("Array2: value count does not match dimensions");
}

template class Array3<double>;
template class Array3<std::complex<double>>;
template class Array2<double>;
template class Array2<std::complex<double>>;

void ProjectionStack::validate() const {
    if (projections.empty())
        throw InvalidArgument("projection stack is empty");
    if (projections.size() != angles.size())
        throw InvalidArgument("projection stack has " + std::to_string(projections.size()) +
                              " projections but " + std::to_string(angles.size()) + " angles");
    const Dims2 d = projections.front().dims();
    for (std::size_t i = 0; i < projections.size(); ++i) {
        if (projections[i].dims() != d)
            throw InvalidArgument("projection " + std::to_string(i) + " has mismatched dimensions");
        if (!all_finite(projections[i].values()))
            throw InvalidArgument("projection " + std::to_string(i) + " contains non-finite values");
    }
    for (const auto& e : angles)
        if (!std::isfinite(e.phi) || !std::isfinite(e.theta) || !std::isfinite(e.psi))
            throw InvalidArgument("projection stack contains non-finite angles");
}

bool all_finite(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

double sum(std::span<const double> values) {
    double s = 0;
    for (double x : values)
        s += x;
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw InvalidArgument("dot: size mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> values) { return std::sqrt(dot(values, values)); }

double max_abs(std::span<const double> values) {
    double m = 0;
    for (double x : values)
        m = std::max(m, std::abs(x));
    return m;
}

int oversampled_extent(int n, double ratio) {
    if (!(ratio >= 1.0))
        throw InvalidArgument("oversampling ratio must be >= 1");
    // Guard against ratio * n landing a hair above an integer.
    int m = static_cast<int>(std::ceil(ratio * n - 1e-9));
    m = std::max(m, n);
    if (m % 2 != 0)
        ++m;
    return m;
}

namespace {

// Offset that maps an index of the small grid onto the big grid with origins aligned.
int origin_shift(int small, int big) { return center_index(big) - center_index(small); }

} // namespace

Volume pad_to(const Volume& v, Dims3 dims) {
    const Dims3& in = v.dims();
    if (dims.nx < in.nx || dims.ny < in.ny || dims.nz < in.nz)
        throw InvalidArgument("pad_to: target dimensions smaller than input");
    Volume out(dims);
    const int ox = origin_shift(in.nx, dims.nx);
    const int oy = origin_shift(in.ny, dims.ny);
    const int oz = origin_shift(in.nz, dims.nz);
    for (int z = 0; z < in.nz; ++z)
        for (int y = 0; y < in.ny; ++y)
            for (int x = 0; x < in.nx; ++x)
                out(x + ox, y + oy, z + oz) = v(x, y, z);
    return out;
}

Volume pad_to_oversampled(const Volume& v, double ratio) {
    const Dims3& d = v.dims();
    return pad_to(v, {oversampled_extent(d.nx, ratio), oversampled_extent(d.ny, ratio),
                      oversampled_extent(d.nz, ratio)});
}

Volume crop_center(const Volume& v, Dims3 dims) {
    const Dims3& in = v.dims();
    if (dims.nx > in.nx || dims.ny > in.ny || dims.nz > in.nz)
        throw InvalidArgument("crop_center: target dimensions larger than input");
    Volume out(dims);
    const int ox = origin_shift(dims.nx, in.nx);
    const int oy = origin_shift(dims.ny, in.ny);
    const int oz = origin_shift(dims.nz, in.nz);
    for (int z = 0; z < dims.nz; ++z)
        for (int y = 0; y < dims.ny; ++y)
            for (int x = 0; x < dims.nx; ++x)
                out(x, y, z) = v(x + ox, y + oy, z + oz);
    return out;
}

Projection crop_center(const Projection& p, Dims2 dims) {
    const Dims2& in = p.dims();
    if (dims.nx > in.nx || dims.ny > in.ny)
        throw InvalidArgument("crop_center: target dimensions larger than input");
    Projection out(dims);
    const int ox = origin_shift(dims.nx, in.nx);
    const int oy = origin_shift(dims.ny, in.ny);
    for (int y = 0; y < dims.ny; ++y)
        for (int x = 0; x < dims.nx; ++x)
            out(x, y) = p(x + ox, y + oy);
    return out;
}

} // namespace resire
