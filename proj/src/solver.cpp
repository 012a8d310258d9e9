#include "resire/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "resire/errors.hpp"
#include "resire/keyvalue.hpp"

namespace resire {

void SolverConfig::validate() const {
    if (iterations < 1)
        throw InvalidArgument("iterations must be >= 1");
    if (!(step_t > 0.0) || !std::isfinite(step_t))
        throw InvalidArgument("step_t must be positive");
    if (!(oversampling_ratio >= 1.0 && oversampling_ratio <= 8.0))
        throw InvalidArgument("oversampling_ratio must lie in [1, 8]");
    if (rfactor_target && !(*rfactor_target > 0.0 && *rfactor_target < 1.0))
        throw InvalidArgument("rfactor_target must lie in (0, 1)");
}

std::string SolverConfig::to_text() const {
    std::string out;
    out += "iterations = " + std::to_string(iterations) + "\n";
    out += "step_t = " + format_double(step_t) + "\n";
    out += "oversampling_ratio = " + format_double(oversampling_ratio) + "\n";
    out += std::string("nonnegativity = ") + (nonnegativity ? "true" : "false") + "\n";
    out += "rfactor_target = " + (rfactor_target ? format_double(*rfactor_target) : std::string("none")) + "\n";
    return out;
}

SolverConfig SolverConfig::from_text(std::string_view text) {
    const KeyValueDoc doc = KeyValueDoc::parse(text);
    doc.require_known({"iterations", "step_t", "oversampling_ratio", "nonnegativity", "rfactor_target"});
    SolverConfig cfg;
    if (doc.contains("iterations"))
        cfg.iterations = static_cast<int>(doc.get_int("iterations"));
    if (doc.contains("step_t"))
        cfg.step_t = doc.get_double("step_t");
    if (doc.contains("oversampling_ratio"))
        cfg.oversampling_ratio = doc.get_double("oversampling_ratio");
    if (doc.contains("nonnegativity"))
        cfg.nonnegativity = doc.get_bool("nonnegativity");
    if (doc.contains("rfactor_target") && doc.get("rfactor_target") != "none")
        cfg.rfactor_target = doc.get_double("rfactor_target");
    cfg.validate();
    return cfg;
}

StepSize StepSize::from(double t, std::size_t projections, int thickness) {
    StepSize s;
    s.lipschitz = static_cast<double>(projections) * static_cast<double>(thickness);
    s.effective = t / s.lipschitz;
    return s;
}

namespace {

void check_inputs(const ProjectionStack& stack, Dims3 dims) {
    stack.validate();
    if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1)
        throw InvalidArgument("volume dimensions must be positive");
    const Dims2 pd = stack.projection_dims();
    if (pd.nx != dims.nx || pd.ny != dims.ny)
        throw InvalidArgument("projection dimensions (" + std::to_string(pd.nx) + ", " + std::to_string(pd.ny) +
                              ") do not match volume (" + std::to_string(dims.nx) + ", " +
                              std::to_string(dims.ny) + ")");
}

double half_squared_distance(const Projection& a, const Projection& b) {
    const auto x = a.values();
    const auto y = b.values();
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return 0.5 * s;
}

Projection difference(const Projection& a, const Projection& b) {
    Projection out(a.dims());
    const auto x = a.values();
    const auto y = b.values();
    auto o = out.values();
    for (std::size_t i = 0; i < o.size(); ++i)
        o[i] = x[i] - y[i];
    return out;
}

} // namespace

double sse(const ProjectionStack& stack, const Volume& v, const SolverConfig& cfg) {
    check_inputs(stack, v.dims());
    const auto calc = forward_project_all(v, stack.angles, cfg.projector(v.dims()));
    double total = 0;
    for (std::size_t i = 0; i < calc.size(); ++i)
        total += half_squared_distance(calc[i], stack.projections[i]);
    return total;
}

Volume gradient(const ProjectionStack& stack, const Volume& v, const SolverConfig& cfg) {
    check_inputs(stack, v.dims());
    const FourierProjector projector(v, cfg.oversampling_ratio);
    Volume grad(v.dims());
    for (std::size_t i = 0; i < stack.count(); ++i) {
        const RotationMatrix r = rotation_from_euler(stack.angles[i]);
        back_project_add(difference(projector.project(r), stack.projections[i]), r, grad);
    }
    return grad;
}

std::pair<Volume, SolveTrace> resire_solve(const ProjectionStack& stack, Dims3 dims, const SolverConfig& cfg) {
    cfg.validate();
    check_inputs(stack, dims);

    const std::size_t n = stack.count();
    std::vector<RotationMatrix> rotations;
    rotations.reserve(n);
    for (const auto& e : stack.angles)
        rotations.push_back(rotation_from_euler(e));

    std::vector<double> denominators(n, 0.0);
    bool rfactor_defined = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (double b : stack.projections[i].values())
            denominators[i] += std::abs(b);
        rfactor_defined = rfactor_defined && denominators[i] > 0.0;
    }

    const StepSize step = StepSize::from(cfg.step_t, n, dims.nz);
    Volume object(dims);
    Volume grad(dims);
    SolveTrace trace;
    double initial_sse = 0;

    for (int k = 0; k < cfg.iterations; ++k) {
        const auto start = std::chrono::steady_clock::now();
        const FourierProjector projector(object, cfg.oversampling_ratio);
        std::fill(grad.values().begin(), grad.values().end(), 0.0);

        double error = 0, rf = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Projection& measured = stack.projections[i];
            const Projection calc = projector.project(rotations[i]);
            const Projection residual = difference(calc, measured);
            error += half_squared_distance(calc, measured);
            if (rfactor_defined) {
                double num = 0;
                const auto c = calc.values();
                const auto m = measured.values();
                for (std::size_t p = 0; p < c.size(); ++p)
                    num += std::abs(std::abs(c[p]) - m[p]);
                rf += num / denominators[i];
            }
            back_project_add(residual, rotations[i], grad);
        }
        rf = rfactor_defined ? rf / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();

        if (!std::isfinite(error))
            throw DivergenceError("non-finite SSE at iteration " + std::to_string(k), k);
        if (k == 0)
            initial_sse = error;
        else if (error > 10.0 * initial_sse)
            throw DivergenceError("SSE grew beyond 10x its initial value at iteration " + std::to_string(k), k);

        const bool stop = cfg.rfactor_target && rfactor_defined && rf <= *cfg.rfactor_target;
        if (!stop) {
            auto o = object.values();
            const auto g = grad.values();
            for (std::size_t v = 0; v < o.size(); ++v) {
                o[v] -= step.effective * g[v];
                if (cfg.nonnegativity && o[v] < 0.0)
                    o[v] = 0.0;
            }
            if (!all_finite(object.values()))
                throw DivergenceError("non-finite voxel values after iteration " + std::to_string(k), k);
        }

        trace.sse_history.push_back(error);
        trace.rfactor_history.push_back(rf);
        trace.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        if (stop)
            break;
    }
    return {std::move(object), std::move(trace)};
}

} // namespace resire
