#include "resire/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resire/errors.hpp"
#include "resire/fourier.hpp"

namespace resire {

double rfactor_single(const Projection& calculated, const Projection& measured) {
    if (calculated.dims() != measured.dims())
        throw InvalidArgument("rfactor: projection dimensions differ");
    const auto c = calculated.values();
    const auto m = measured.values();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        num += std::abs(std::abs(c[i]) - m[i]);
        den += std::abs(m[i]);
    }
    if (den == 0.0)
        throw UndefinedMetric("rfactor: measured projection is identically zero");
    return num / den;
}

RFactorReport rfactor_from_projections(const std::vector<Projection>& calculated, const ProjectionStack& stack) {
    if (calculated.size() != stack.count())
        throw InvalidArgument("rfactor: projection count mismatch");
    RFactorReport report;
    report.per_angle.reserve(calculated.size());
    for (std::size_t i = 0; i < calculated.size(); ++i) {
        try {
            report.per_angle.push_back(rfactor_single(calculated[i], stack.projections[i]));
        } catch (const UndefinedMetric&) {
            throw UndefinedMetric("rfactor: measured projection " + std::to_string(i) + " is identically zero");
        }
    }
    double total = 0;
    for (double r : report.per_angle)
        total += r;
    report.aggregate = total / static_cast<double>(report.per_angle.size());
    return report;
}

RFactorReport rfactor(const ProjectionStack& stack, const Volume& v, const ProjectorConfig& cfg) {
    stack.validate();
    if (stack.projection_dims() != Dims2{v.dims().nx, v.dims().ny})
        throw InvalidArgument("rfactor: projection dimensions do not match volume");
    return rfactor_from_projections(forward_project_all(v, stack.angles, cfg), stack);
}

FscCurve fsc(const Volume& a, const Volume& b, double shell_width) {
    if (a.dims() != b.dims())
        throw InvalidArgument("fsc: volume dimensions differ");
    const Dims3 d = a.dims();
    const double width = shell_width > 0 ? shell_width : 1.0 / std::max({d.nx, d.ny, d.nz});
    const auto shells = static_cast<std::size_t>(std::floor(0.5 / width + 1e-9));

    const Spectrum3 fa = fft3_centered(a);
    const Spectrum3 fb = fft3_centered(b);

    std::vector<double> cross(shells + 1, 0.0), pa(shells + 1, 0.0), pb(shells + 1, 0.0);
    std::vector<std::size_t> count(shells + 1, 0);
    const int cx = center_index(d.nx), cy = center_index(d.ny), cz = center_index(d.nz);
    for (int z = 0; z < d.nz; ++z) {
        const double kz = static_cast<double>(z - cz) / d.nz;
        for (int y = 0; y < d.ny; ++y) {
            const double ky = static_cast<double>(y - cy) / d.ny;
            for (int x = 0; x < d.nx; ++x) {
                const double kx = static_cast<double>(x - cx) / d.nx;
                const double k = std::sqrt(kx * kx + ky * ky + kz * kz);
                const auto bin = static_cast<std::size_t>(std::lround(k / width));
                if (bin == 0 || bin > shells)
                    continue;
                const Complex va = fa(x, y, z), vb = fb(x, y, z);
                cross[bin] += (va * std::conj(vb)).real();
                pa[bin] += std::norm(va);
                pb[bin] += std::norm(vb);
                ++count[bin];
            }
        }
    }

    FscCurve curve;
    curve.reserve(shells);
    for (std::size_t s = 1; s <= shells; ++s) {
        FscShell shell{static_cast<double>(s) * width, 0.0, count[s]};
        const double denom = std::sqrt(pa[s] * pb[s]);
        if (count[s] > 0 && denom > 0)
            shell.correlation = std::clamp(cross[s] / denom, -1.0, 1.0);
        curve.push_back(shell);
    }
    return curve;
}

} // namespace resire
