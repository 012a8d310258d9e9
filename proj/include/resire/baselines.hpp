#pragma once

#include <utility>

#include "resire/grid.hpp"
#include "resire/solver.hpp"

namespace resire {

struct SirtConfig {
    int iterations{400};
    double relaxation{1.0}; ///< t in (0, 1]

    void validate() const;
};

enum class FbpFilter { RamLak, HammingRamLak };

struct FbpConfig {
    FbpFilter filter{FbpFilter::RamLak};
};

/// SIRT with the real-space projector pair:
///     O <- O - t * C * A^T ( (A O - b) / W )
/// A = forward_project_real, A^T = back_project, W = A(1) is the per-pixel ray
/// weight (pixels with W < 1e-8 are skipped) and C = 1 / A^T(1) the per-voxel
/// coverage. Single tilt axis only (phi = psi = 0); anything else throws
/// UnsupportedConfiguration. The trace records SSE and R-factor under A.
[[nodiscard]] std::pair<Volume, SolveTrace> sirt_solve(const ProjectionStack& stack, Dims3 dims,
                                                       const SirtConfig& cfg);

/// Ram-Lak frequency response for rows of length n zero-padded to 2n, scaled to
/// approach 1 at Nyquist. Built from the band-limited spatial kernel
/// h(0) = 1/4, h(odd m) = -1 / (pi m)^2 so the DC term is not discarded.
[[nodiscard]] std::vector<double> ramp_filter(int n, FbpFilter filter);

/// Ramp-filters every detector row (along x) of a projection.
[[nodiscard]] Projection filter_rows(const Projection& p, FbpFilter filter);

/// Slice-by-slice filtered back projection for a single tilt axis about y:
/// ramp filter each row, back project with the bilinear gather, scale by pi / (2 N).
[[nodiscard]] Volume fbp_solve(const ProjectionStack& stack, Dims3 dims, const FbpConfig& cfg = {});

/// Throws UnsupportedConfiguration unless every angle has phi = psi = 0.
void require_single_axis(const TiltSeries& angles, const char* algorithm);

} // namespace resire
