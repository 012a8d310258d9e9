#include "resire/geometry.hpp"

#include <cmath>
#include <numbers>

#include "resire/errors.hpp"

namespace resire {

namespace {

double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

RotationMatrix rot_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    return RotationMatrix({{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}});
}

RotationMatrix rot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    return RotationMatrix({{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}});
}

RotationMatrix rot_x(double a) {
    const double c = std::cos(a), s = std::sin(a);
    return RotationMatrix({{{1, 0, 0}, {0, c, -s}, {0, s, c}}});
}

} // namespace

RotationMatrix RotationMatrix::transposed() const {
    std::array<std::array<double, 3>, 3> t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t[i][j] = m_[j][i];
    return RotationMatrix(t);
}

Vec3 RotationMatrix::apply(const Vec3& p) const {
    return {m_[0][0] * p.x + m_[0][1] * p.y + m_[0][2] * p.z,
            m_[1][0] * p.x + m_[1][1] * p.y + m_[1][2] * p.z,
            m_[2][0] * p.x + m_[2][1] * p.y + m_[2][2] * p.z};
}

Vec3 RotationMatrix::apply_transposed(const Vec3& p) const {
    return {m_[0][0] * p.x + m_[1][0] * p.y + m_[2][0] * p.z,
            m_[0][1] * p.x + m_[1][1] * p.y + m_[2][1] * p.z,
            m_[0][2] * p.x + m_[1][2] * p.y + m_[2][2] * p.z};
}

double RotationMatrix::determinant() const {
    const auto& a = m_;
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

RotationMatrix operator*(const RotationMatrix& a, const RotationMatrix& b) {
    std::array<std::array<double, 3>, 3> out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out[i][j] = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return RotationMatrix(out);
}

RotationMatrix rotation_from_euler(const EulerTriple& e) {
    if (!std::isfinite(e.phi) || !std::isfinite(e.theta) || !std::isfinite(e.psi))
        throw InvalidArgument("rotation_from_euler: Euler angles must be finite");
    return rot_z(radians(e.phi)) * rot_y(radians(e.theta)) * rot_x(radians(e.psi));
}

AffineSliceMap::AffineSliceMap(const RotationMatrix& r) {
    linear_ = {{{r.element(1, 1), r.element(2, 1)}, {r.element(1, 2), r.element(2, 2)}}};
    drift_ = {r.element(3, 1), r.element(3, 2)};
}

} // namespace resire
