#pragma once

#include <vector>

#include "resire/fourier.hpp"
#include "resire/geometry.hpp"
#include "resire/grid.hpp"

namespace resire {

inline constexpr double kDefaultOversampling = 2.0;

struct ProjectorConfig {
    double oversampling_ratio{kDefaultOversampling};
    Dims3 volume_dims{};

    /// Throws InvalidArgument unless the ratio lies in [1, 8] and dims are positive.
    void validate() const;
};

/// Fourier-slice projector bound to one volume.
///
/// The volume is zero-padded and transformed once; each projection is then a
/// central-slice extraction plus a 2D inverse transform, cropped back to (nx, ny).
class FourierProjector {
public:
    FourierProjector(const Volume& v, double oversampling_ratio);

    [[nodiscard]] Projection project(const EulerTriple& e) const;
    [[nodiscard]] Projection project(const RotationMatrix& r) const;

private:
    Dims3 dims_;
    Spectrum3 spectrum_;
};

/// Projection of `v` at orientation `e` via the Fourier slice theorem.
[[nodiscard]] Projection forward_project(const Volume& v, const EulerTriple& e, const ProjectorConfig& cfg);

/// All projections of a tilt series, sharing one 3D transform.
[[nodiscard]] std::vector<Projection> forward_project_all(const Volume& v, const TiltSeries& angles,
                                                          const ProjectorConfig& cfg);

/// Gradient half of the solver: voxel (u, v, w) takes the bilinear sample of the
/// residual at the slice-map position (x, y). Positions outside [0, n-1] on
/// either detector axis read as zero.
[[nodiscard]] Volume back_project(const Projection& residual, const EulerTriple& e, Dims3 dims);
[[nodiscard]] Volume back_project(const Projection& residual, const RotationMatrix& r, Dims3 dims);

/// Adds back_project(residual) into `acc` without allocating.
void back_project_add(const Projection& residual, const RotationMatrix& r, Volume& acc, double scale = 1.0);

/// Real-space scatter projector, the exact transpose of back_project: every voxel
/// deposits its value onto the detector with the same bilinear weights.
[[nodiscard]] Projection forward_project_real(const Volume& v, const EulerTriple& e);
[[nodiscard]] Projection forward_project_real(const Volume& v, const RotationMatrix& r);

} // namespace resire
