#include "resire/projector.hpp"

#include <cmath>

#include "resire/errors.hpp"

namespace resire {

void ProjectorConfig::validate() const {
    if (!(oversampling_ratio >= 1.0 && oversampling_ratio <= 8.0))
        throw InvalidArgument("oversampling ratio must lie in [1, 8]");
    if (volume_dims.nx < 1 || volume_dims.ny < 1 || volume_dims.nz < 1)
        throw InvalidArgument("volume dimensions must be positive");
}

FourierProjector::FourierProjector(const Volume& v, double oversampling_ratio)
    : dims_(v.dims()), spectrum_(fft3_centered(pad_to_oversampled(v, oversampling_ratio))) {}

Projection FourierProjector::project(const RotationMatrix& r) const {
    return crop_center(ifft2_centered(extract_central_slice(spectrum_, r)), Dims2{dims_.nx, dims_.ny});
}

Projection FourierProjector::project(const EulerTriple& e) const { return project(rotation_from_euler(e)); }

namespace {

void check_volume(const Volume& v, const ProjectorConfig& cfg) {
    cfg.validate();
    if (v.dims() != cfg.volume_dims)
        throw InvalidArgument("volume dimensions do not match projector configuration");
}

// Bilinear footprint of one detector position. Positions outside [0, n-1]
// have no footprint; at the upper edge the second tap carries zero weight.
struct Footprint {
    bool inside{false};
    int x0{0}, y0{0};
    double w[2][2]{}; // [dy][dx]
};

inline Footprint footprint(double x, double y, int nx, int ny) {
    Footprint f;
    if (!(x >= 0.0 && y >= 0.0 && x <= nx - 1 && y <= ny - 1))
        return f;
    f.inside = true;
    f.x0 = static_cast<int>(std::floor(x));
    f.y0 = static_cast<int>(std::floor(y));
    const double fx = x - f.x0, fy = y - f.y0;
    f.w[0][0] = (1.0 - fx) * (1.0 - fy);
    f.w[0][1] = fx * (1.0 - fy);
    f.w[1][0] = (1.0 - fx) * fy;
    f.w[1][1] = fx * fy;
    return f;
}

// Visits every voxel with its detector footprint. Fn(voxel_index, footprint).
template <typename Fn>
void for_each_footprint(const RotationMatrix& r, Dims3 dims, Dims2 det, Fn&& fn) {
    const AffineSliceMap map(r);
    const int cu = center_index(dims.nx), cv = center_index(dims.ny), cw = center_index(dims.nz);
    const double cx = center_index(det.nx), cy = center_index(det.ny);
    std::size_t idx = 0;
    for (int z = 0; z < dims.nz; ++z) {
        const double w = z - cw;
        for (int y = 0; y < dims.ny; ++y) {
            const double v = y - cv;
            for (int x = 0; x < dims.nx; ++x, ++idx) {
                const Vec2 p = map.apply(x - cu, v, w);
                const Footprint f = footprint(p.x + cx, p.y + cy, det.nx, det.ny);
                if (f.inside)
                    fn(idx, f);
            }
        }
    }
}

} // namespace

Projection forward_project(const Volume& v, const EulerTriple& e, const ProjectorConfig& cfg) {
    check_volume(v, cfg);
    return FourierProjector(v, cfg.oversampling_ratio).project(e);
}

std::vector<Projection> forward_project_all(const Volume& v, const TiltSeries& angles, const ProjectorConfig& cfg) {
    check_volume(v, cfg);
    const FourierProjector projector(v, cfg.oversampling_ratio);
    std::vector<Projection> out;
    out.reserve(angles.size());
    for (const auto& e : angles)
        out.push_back(projector.project(e));
    return out;
}

void back_project_add(const Projection& residual, const RotationMatrix& r, Volume& acc, double scale) {
    const Dims3 dims = acc.dims();
    const Dims2 det = residual.dims();
    if (det.nx != dims.nx || det.ny != dims.ny)
        throw InvalidArgument("back_project: residual dimensions do not match volume (nx, ny)");
    const auto res = residual.values();
    auto out = acc.values();
    const std::size_t stride = static_cast<std::size_t>(det.nx);
    for_each_footprint(r, dims, det, [&](std::size_t idx, const Footprint& f) {
        const std::size_t base = static_cast<std::size_t>(f.x0) + stride * static_cast<std::size_t>(f.y0);
        double s = f.w[0][0] * res[base];
        if (f.w[0][1] != 0.0)
            s += f.w[0][1] * res[base + 1];
        if (f.w[1][0] != 0.0)
            s += f.w[1][0] * res[base + stride];
        if (f.w[1][1] != 0.0)
            s += f.w[1][1] * res[base + stride + 1];
        out[idx] += scale * s;
    });
}

Volume back_project(const Projection& residual, const RotationMatrix& r, Dims3 dims) {
    Volume out(dims);
    back_project_add(residual, r, out);
    return out;
}

Volume back_project(const Projection& residual, const EulerTriple& e, Dims3 dims) {
    return back_project(residual, rotation_from_euler(e), dims);
}

Projection forward_project_real(const Volume& v, const RotationMatrix& r) {
    const Dims3 dims = v.dims();
    const Dims2 det{dims.nx, dims.ny};
    Projection out(det);
    const auto vals = v.values();
    auto proj = out.values();
    const std::size_t stride = static_cast<std::size_t>(det.nx);
    for_each_footprint(r, dims, det, [&](std::size_t idx, const Footprint& f) {
        const double value = vals[idx];
        const std::size_t base = static_cast<std::size_t>(f.x0) + stride * static_cast<std::size_t>(f.y0);
        proj[base] += f.w[0][0] * value;
        if (f.w[0][1] != 0.0)
            proj[base + 1] += f.w[0][1] * value;
        if (f.w[1][0] != 0.0)
            proj[base + stride] += f.w[1][0] * value;
        if (f.w[1][1] != 0.0)
            proj[base + stride + 1] += f.w[1][1] * value;
    });
    return out;
}

Projection forward_project_real(const Volume& v, const EulerTriple& e) {
    return forward_project_real(v, rotation_from_euler(e));
}

} // namespace resire
