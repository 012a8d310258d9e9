#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "resire/geometry.hpp"
#include "resire/grid.hpp"
#include "resire/projector.hpp"

namespace resire {

/// Ellipsoidal shell: points inside the outer ellipsoid `radii` and outside the
/// inner one `radii - thickness`. A thickness reaching the smallest radius makes
/// it solid. Center and radii are in voxels, relative to the volume origin.
struct EllipsoidShell {
    Vec3 center{};
    Vec3 radii{1, 1, 1};
    double thickness{1};
    double density{1};

    [[nodiscard]] bool contains(double u, double v, double w) const;
};

struct PhantomSpec {
    int size{64}; ///< cubic volume edge N
    std::vector<EllipsoidShell> shells;
    double smoothing_sigma{0}; ///< Gaussian blur in voxels; 0 disables it
    std::uint64_t seed{0};

    [[nodiscard]] Dims3 dims() const { return {size, size, size}; }
    /// Every shell must lie inside the ball of radius 0.45 N about the origin.
    void validate() const;
};

struct NoiseSpec {
    double sigma_fraction{0.05};
    std::uint64_t seed{0};
};

struct TiltRangeSpec {
    double start{-70};
    double end{70};
    double step{3.5};
};

/// A named preset: phantom geometry plus the default noise level and tilt range.
struct Preset {
    PhantomSpec phantom;
    NoiseSpec noise;
    TiltRangeSpec tilt;

    [[nodiscard]] static Preset from_text(std::string_view text);
    [[nodiscard]] std::string to_text() const;
};

/// Shipped presets: "vesicle64", "ball32". Throws InvalidArgument for other names.
[[nodiscard]] Preset load_preset(const std::string& name);
[[nodiscard]] std::vector<std::string> preset_names();

/// Sum of shell indicator fields times densities, then Gaussian smoothing.
[[nodiscard]] Volume make_vesicle_phantom(const PhantomSpec& spec);

/// Separable Gaussian blur with a kernel truncated at 4 sigma; outside the grid reads as zero.
[[nodiscard]] Volume gaussian_smooth(const Volume& v, double sigma);

/// Single-axis series (0, theta, 0) from start to end inclusive.
[[nodiscard]] TiltSeries tilt_range(double start_deg, double end_deg, double step_deg);

/// Forward projections with additive Gaussian noise. For projection i the noise
/// sigma is sigma_fraction * mean of its positive noiseless pixels and the
/// samples come from GaussianStream(noise.seed, i).
[[nodiscard]] ProjectionStack simulate_stack(const Volume& v, const TiltSeries& angles, const NoiseSpec& noise,
                                             const ProjectorConfig& cfg);

/// Reproducible standard-normal stream: std::mt19937_64 seeded with
/// SplitMix64(seed + 0x9E3779B97F4A7C15 * (index + 1)), converted with the
/// Marsaglia polar method on 53-bit uniforms in (-1, 1).
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t index);
    double next();

private:
    std::mt19937_64 engine_;
    bool has_spare_{false};
    double spare_{0};
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x);

} // namespace resire
