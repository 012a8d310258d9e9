#pragma once

#include <cstddef>
#include <vector>

#include "resire/grid.hpp"
#include "resire/projector.hpp"

namespace resire {

struct RFactorReport {
    std::vector<double> per_angle;
    double aggregate{0}; ///< arithmetic mean of per_angle
};

/// L1 relative error of one projection:
///     sum | |calc| - measured |  /  sum |measured|
/// The absolute value is applied to the calculated projection first. For
/// nonnegative data this coincides with sum |calc - measured| / sum |measured|.
/// Throws UndefinedMetric if the measured projection is identically zero.
[[nodiscard]] double rfactor_single(const Projection& calculated, const Projection& measured);

/// R-factor of `calculated` projections against the stack's measurements.
[[nodiscard]] RFactorReport rfactor_from_projections(const std::vector<Projection>& calculated,
                                                     const ProjectionStack& stack);

/// R-factor of volume `v` against the stack, projecting with the Fourier-slice projector.
[[nodiscard]] RFactorReport rfactor(const ProjectionStack& stack, const Volume& v, const ProjectorConfig& cfg);

struct FscShell {
    double frequency{0};   ///< bin center, cycles/pixel
    double correlation{0}; ///< in [-1, 1]; 0 for an empty shell
    std::size_t count{0};  ///< Fourier voxels in the shell
};

/// Shells in strictly increasing frequency over (0, 0.5]. The DC term is not reported.
using FscCurve = std::vector<FscShell>;

/// Fourier shell correlation. Each Fourier voxel goes to the shell whose center
/// is nearest to its radial frequency |k| (cycles/pixel, each axis normalized by
/// its own extent). shell_width <= 0 selects 1 / max(nx, ny, nz).
[[nodiscard]] FscCurve fsc(const Volume& a, const Volume& b, double shell_width = 0.0);

} // namespace resire
