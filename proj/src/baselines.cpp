#include "resire/baselines.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "resire/errors.hpp"
#include "resire/fourier.hpp"
#include "resire/projector.hpp"

namespace resire {

namespace {

constexpr double kMinRayWeight = 1e-8;

void check_stack(const ProjectionStack& stack, Dims3 dims) {
    stack.validate();
    if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1)
        throw InvalidArgument("volume dimensions must be positive");
    if (stack.projection_dims() != Dims2{dims.nx, dims.ny})
        throw InvalidArgument("projection dimensions do not match volume (nx, ny)");
}

} // namespace

void SirtConfig::validate() const {
    if (iterations < 1)
        throw InvalidArgument("SIRT iterations must be >= 1");
    if (!(relaxation > 0.0 && relaxation <= 1.0))
        throw InvalidArgument("SIRT relaxation must lie in (0, 1]");
}

void require_single_axis(const TiltSeries& angles, const char* algorithm) {
    for (std::size_t i = 0; i < angles.size(); ++i)
        if (angles[i].phi != 0.0 || angles[i].psi != 0.0)
            throw UnsupportedConfiguration(std::string(algorithm) +
                                           " supports a single tilt axis only (phi = psi = 0); angle " +
                                           std::to_string(i) + " is multi-axis");
}

std::pair<Volume, SolveTrace> sirt_solve(const ProjectionStack& stack, Dims3 dims, const SirtConfig& cfg) {
    cfg.validate();
    check_stack(stack, dims);
    require_single_axis(stack.angles, "SIRT");

    const std::size_t n = stack.count();
    std::vector<RotationMatrix> rotations;
    for (const auto& e : stack.angles)
        rotations.push_back(rotation_from_euler(e));

    const Volume ones(dims, 1.0);
    const Projection detector_ones(Dims2{dims.nx, dims.ny}, 1.0);
    std::vector<Projection> ray_weight;
    Volume coverage(dims);
    std::vector<double> denominators(n, 0.0);
    bool rfactor_defined = true;
    for (std::size_t i = 0; i < n; ++i) {
        ray_weight.push_back(forward_project_real(ones, rotations[i]));
        back_project_add(detector_ones, rotations[i], coverage);
        for (double b : stack.projections[i].values())
            denominators[i] += std::abs(b);
        rfactor_defined = rfactor_defined && denominators[i] > 0.0;
    }
    for (double& c : coverage.values())
        c = c > kMinRayWeight ? 1.0 / c : 0.0;

    Volume object(dims);
    Volume correction(dims);
    SolveTrace trace;
    for (int k = 0; k < cfg.iterations; ++k) {
        const auto start = std::chrono::steady_clock::now();
        std::fill(correction.values().begin(), correction.values().end(), 0.0);
        double error = 0, rf = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Projection residual = forward_project_real(object, rotations[i]);
            auto r = residual.values();
            const auto b = stack.projections[i].values();
            const auto w = ray_weight[i].values();
            double num = 0;
            for (std::size_t p = 0; p < r.size(); ++p) {
                num += std::abs(std::abs(r[p]) - b[p]);
                const double diff = r[p] - b[p];
                error += 0.5 * diff * diff;
                r[p] = w[p] >= kMinRayWeight ? diff / w[p] : 0.0;
            }
            if (rfactor_defined)
                rf += num / denominators[i];
            back_project_add(residual, rotations[i], correction);
        }
        auto o = object.values();
        const auto c = correction.values();
        const auto cov = coverage.values();
        for (std::size_t v = 0; v < o.size(); ++v)
            o[v] -= cfg.relaxation * cov[v] * c[v];

        trace.sse_history.push_back(error);
        trace.rfactor_history.push_back(rfactor_defined ? rf / static_cast<double>(n)
                                                        : std::numeric_limits<double>::quiet_NaN());
        trace.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return {std::move(object), std::move(trace)};
}

std::vector<double> ramp_filter(int n, FbpFilter filter) {
    const int len = 2 * n;
    Array2<Complex> kernel(Dims2{len, 1});
    for (int i = 0; i < len; ++i) {
        const int m = i <= len / 2 ? i : i - len; // circular offset
        double h = 0;
        if (m == 0)
            h = 0.25;
        else if (m % 2 != 0)
            h = -1.0 / (std::numbers::pi * std::numbers::pi * static_cast<double>(m) * m);
        kernel(i, 0) = h;
    }
    fft_rows(kernel, false);
    std::vector<double> response(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
        double value = 2.0 * kernel(i, 0).real();
        if (filter == FbpFilter::HammingRamLak) {
            const double f = static_cast<double>(i <= len / 2 ? i : i - len) / len;
            value *= 0.54 + 0.46 * std::cos(2.0 * std::numbers::pi * f);
        }
        response[static_cast<std::size_t>(i)] = value;
    }
    return response;
}

Projection filter_rows(const Projection& p, FbpFilter filter) {
    const Dims2 d = p.dims();
    const int len = 2 * d.nx;
    const std::vector<double> response = ramp_filter(d.nx, filter);
    Array2<Complex> rows(Dims2{len, d.ny});
    for (int y = 0; y < d.ny; ++y)
        for (int x = 0; x < d.nx; ++x)
            rows(x, y) = p(x, y);
    fft_rows(rows, false);
    for (int y = 0; y < d.ny; ++y)
        for (int x = 0; x < len; ++x)
            rows(x, y) *= response[static_cast<std::size_t>(x)];
    fft_rows(rows, true);
    Projection out(d);
    for (int y = 0; y < d.ny; ++y)
        for (int x = 0; x < d.nx; ++x)
            out(x, y) = rows(x, y).real();
    return out;
}

Volume fbp_solve(const ProjectionStack& stack, Dims3 dims, const FbpConfig& cfg) {
    check_stack(stack, dims);
    require_single_axis(stack.angles, "FBP");
    Volume out(dims);
    const double scale = std::numbers::pi / (2.0 * static_cast<double>(stack.count()));
    for (std::size_t i = 0; i < stack.count(); ++i)
        back_project_add(filter_rows(stack.projections[i], cfg.filter), rotation_from_euler(stack.angles[i]), out,
                         scale);
    return out;
}

} // namespace resire
