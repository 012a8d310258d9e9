#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "resire/grid.hpp"
#include "resire/projector.hpp"

namespace resire {

struct SolverConfig {
    int iterations{400};
    double step_t{2.0};
    double oversampling_ratio{kDefaultOversampling};
    bool nonnegativity{false};
    std::optional<double> rfactor_target{};

    /// Throws InvalidArgument on K < 1, t <= 0, ratio outside [1, 8] or a target outside (0, 1).
    void validate() const;

    /// "key = value" lines with every field, defaults included. An unset target is written as "none".
    [[nodiscard]] std::string to_text() const;
    /// Missing keys keep their defaults; unknown keys are a FormatError.
    [[nodiscard]] static SolverConfig from_text(std::string_view text);

    [[nodiscard]] ProjectorConfig projector(Dims3 dims) const { return {oversampling_ratio, dims}; }
};

/// Per-iteration telemetry. Entry k describes the iterate O^k the iteration started from.
struct SolveTrace {
    std::vector<double> sse_history;
    std::vector<double> rfactor_history; ///< NaN when some measured projection is all zero
    std::vector<double> seconds;

    [[nodiscard]] std::size_t size() const { return sse_history.size(); }
};

/// Step size from the accumulated Lipschitz bound L = n * N_z of n projections
/// through a volume N_z voxels thick; the step is t / L.
struct StepSize {
    double lipschitz{1};
    double effective{1};

    [[nodiscard]] static StepSize from(double t, std::size_t projections, int thickness);
};

/// 0.5 * sum over angles and pixels of (Fourier-slice projection - measurement)^2.
[[nodiscard]] double sse(const ProjectionStack& stack, const Volume& v, const SolverConfig& cfg);

/// Hybrid gradient: sum over angles of back_project(forward_project(v) - b).
[[nodiscard]] Volume gradient(const ProjectionStack& stack, const Volume& v, const SolverConfig& cfg);

/// Gradient descent from O^0 = 0:
///     O^{k+1} = O^k - t / (n N_z) * sum_theta back_project(forward_project(O^k, theta) - b_theta)
/// with an optional nonnegativity clamp after each update and an optional
/// early stop once the R-factor of the current iterate reaches the target.
/// Throws DivergenceError if values turn non-finite or SSE exceeds 10x its initial value.
[[nodiscard]] std::pair<Volume, SolveTrace> resire_solve(const ProjectionStack& stack, Dims3 dims,
                                                         const SolverConfig& cfg);

} // namespace resire
