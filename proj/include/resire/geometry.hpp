#pragma once

#include <array>
#include <vector>

namespace resire {

/// Orientation of one projection as ZYX Euler angles in degrees.
/// phi rotates about z, theta about y, psi about x. Values are kept exactly as given.
struct EulerTriple {
    double phi{0};
    double theta{0};
    double psi{0};

    friend bool operator==(const EulerTriple&, const EulerTriple&) = default;
};

using TiltSeries = std::vector<EulerTriple>;

struct Vec2 {
    double x{0};
    double y{0};
};

struct Vec3 {
    double x{0};
    double y{0};
    double z{0};
};

/// Proper rotation R = Z(phi) * Y(theta) * X(psi), active convention.
///
/// The basic matrices are the standard right-handed ones:
///
///     Z(a) = [ c -s  0 ]    Y(a) = [ c  0  s ]    X(a) = [ 1  0  0 ]
///            [ s  c  0 ]           [ 0  1  0 ]           [ 0  c -s ]
///            [ 0  0  1 ]           [-s  0  c ]           [ 0  s  c ]
///
/// Index convention: storage is 0-based row-major, `r(row, col)`. The 1-based
/// element R_{i,j} used when writing the slice map is `element(i, j) == r(i-1, j-1)`.
/// This is the only place the two conventions meet.
///
/// A projection at orientation R integrates the object along the rotated z axis:
/// object point p = R * (x, y, z) lands on detector pixel (x, y).
class RotationMatrix {
public:
    RotationMatrix() = default; // identity
    explicit RotationMatrix(const std::array<std::array<double, 3>, 3>& rows) : m_(rows) {}

    [[nodiscard]] double operator()(int row, int col) const { return m_[row][col]; }
    [[nodiscard]] double element(int i, int j) const { return m_[i - 1][j - 1]; }

    [[nodiscard]] RotationMatrix transposed() const;
    [[nodiscard]] Vec3 apply(const Vec3& p) const;
    [[nodiscard]] Vec3 apply_transposed(const Vec3& p) const;
    [[nodiscard]] double determinant() const;

    friend RotationMatrix operator*(const RotationMatrix& a, const RotationMatrix& b);

private:
    std::array<std::array<double, 3>, 3> m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
};

/// Throws InvalidArgument if any angle is non-finite.
[[nodiscard]] RotationMatrix rotation_from_euler(const EulerTriple& e);

/// Maps an object voxel (u, v, w) to the detector position (x, y) it projects onto:
///
///     [x]   [R11 R21] [u]   [R31]
///     [y] = [R12 R22] [v] + [R32] w
///
/// i.e. the first two rows of R^T (u, v, w). The w term is a pure translation,
/// so every w-slice is the w = 0 slice shifted by `drift * w`.
class AffineSliceMap {
public:
    explicit AffineSliceMap(const RotationMatrix& r);

    [[nodiscard]] Vec2 apply(double u, double v, double w) const {
        return {linear_[0][0] * u + linear_[0][1] * v + drift_.x * w,
                linear_[1][0] * u + linear_[1][1] * v + drift_.y * w};
    }

    [[nodiscard]] const std::array<std::array<double, 2>, 2>& linear() const { return linear_; }
    [[nodiscard]] const Vec2& drift() const { return drift_; }

private:
    std::array<std::array<double, 2>, 2> linear_{};
    Vec2 drift_{};
};

[[nodiscard]] inline AffineSliceMap slice_map(const RotationMatrix& r) { return AffineSliceMap(r); }

} // namespace resire
