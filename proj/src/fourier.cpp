#include "resire/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "resire/errors.hpp"

namespace resire {

namespace {

struct FftwFree {
    void operator()(Complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<Complex[], FftwFree>;

FftwBuffer allocate(std::size_t n) {
    auto* p = static_cast<Complex*>(fftw_malloc(sizeof(Complex) * n));
    if (p == nullptr)
        throw std::bad_alloc();
    return FftwBuffer(p);
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// FFTW planning is not thread-safe; execution on fresh arrays is. Plans are
// created once per shape under a lock and live for the whole process.
class PlanCache {
public:
    // shape is row-major (slowest first); howmany > 1 means a batch of 1D transforms.
    fftw_plan get(const std::vector<int>& shape, int howmany, int sign) {
        const auto key = std::make_tuple(shape, howmany, sign);
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        std::size_t total = static_cast<std::size_t>(howmany);
        for (int n : shape)
            total *= static_cast<std::size_t>(n);
        FftwBuffer in = allocate(total);
        FftwBuffer out = allocate(total);
        fftw_plan plan = nullptr;
        if (howmany == 1) {
            plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), as_fftw(in.get()),
                                 as_fftw(out.get()), sign, FFTW_ESTIMATE);
        } else {
            const int n = shape.front();
            plan = fftw_plan_many_dft(1, &n, howmany, as_fftw(in.get()), nullptr, 1, n, as_fftw(out.get()),
                                      nullptr, 1, n, sign, FFTW_ESTIMATE);
        }
        if (plan == nullptr)
            throw std::runtime_error("FFTW planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<std::vector<int>, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void execute(const std::vector<int>& shape, int howmany, int sign, Complex* in, Complex* out) {
    fftw_execute_dft(plan_cache().get(shape, howmany, sign), as_fftw(in), as_fftw(out));
}

// Centered index i <-> standard FFT index (i - c) mod n.
inline int to_standard(int i, int n) {
    const int k = i - center_index(n);
    return k < 0 ? k + n : k;
}

template <typename Src>
Spectrum3 transform3(const Src& v, int sign) {
    const Dims3 d = v.dims();
    const std::size_t total = d.size();
    FftwBuffer in = allocate(total);
    FftwBuffer out = allocate(total);
    // in[standard] = v[centered]
    for (int z = 0; z < d.nz; ++z) {
        const int sz = to_standard(z, d.nz);
        for (int y = 0; y < d.ny; ++y) {
            const int sy = to_standard(y, d.ny);
            for (int x = 0; x < d.nx; ++x) {
                const int sx = to_standard(x, d.nx);
                in[sx + static_cast<std::size_t>(d.nx) * (sy + static_cast<std::size_t>(d.ny) * sz)] =
                    Complex(v(x, y, z));
            }
        }
    }
    execute({d.nz, d.ny, d.nx}, 1, sign, in.get(), out.get());
    Spectrum3 s(d);
    for (int z = 0; z < d.nz; ++z) {
        const int sz = to_standard(z, d.nz);
        for (int y = 0; y < d.ny; ++y) {
            const int sy = to_standard(y, d.ny);
            for (int x = 0; x < d.nx; ++x) {
                const int sx = to_standard(x, d.nx);
                s(x, y, z) = out[sx + static_cast<std::size_t>(d.nx) * (sy + static_cast<std::size_t>(d.ny) * sz)];
            }
        }
    }
    return s;
}

template <typename Src>
Array2<Complex> transform2(const Src& p, int sign) {
    const Dims2 d = p.dims();
    FftwBuffer in = allocate(d.size());
    FftwBuffer out = allocate(d.size());
    for (int y = 0; y < d.ny; ++y) {
        const int sy = to_standard(y, d.ny);
        for (int x = 0; x < d.nx; ++x)
            in[to_standard(x, d.nx) + static_cast<std::size_t>(d.nx) * sy] = Complex(p(x, y));
    }
    execute({d.ny, d.nx}, 1, sign, in.get(), out.get());
    Array2<Complex> s(d);
    for (int y = 0; y < d.ny; ++y) {
        const int sy = to_standard(y, d.ny);
        for (int x = 0; x < d.nx; ++x)
            s(x, y) = out[to_standard(x, d.nx) + static_cast<std::size_t>(d.nx) * sy];
    }
    return s;
}

// Highest valid array coordinate along an axis. Even axes are closed at +n/2
// (array index n), which aliases to index 0 by periodicity.
inline int upper_coordinate(int n) { return n % 2 == 0 ? n : n - 1; }

inline int wrap_nyquist(int i, int n) { return i == n ? 0 : i; }

} // namespace

Spectrum3 fft3_centered(const Volume& v) { return transform3(v, FFTW_FORWARD); }

Spectrum3 fft3_centered(const Array3<Complex>& v) { return transform3(v, FFTW_FORWARD); }

Array3<Complex> ifft3_centered(const Spectrum3& s) {
    Array3<Complex> out = transform3(s, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(s.size());
    for (auto& c : out.values())
        c *= scale;
    return out;
}

Spectrum2 fft2_centered(const Projection& p) { return transform2(p, FFTW_FORWARD); }

Array2<Complex> ifft2_centered_complex(const Spectrum2& s) {
    Array2<Complex> out = transform2(s, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(s.size());
    for (auto& c : out.values())
        c *= scale;
    return out;
}

Projection ifft2_centered(const Spectrum2& s) {
    const Array2<Complex> c = ifft2_centered_complex(s);
    Projection out(s.dims());
    for (std::size_t i = 0; i < c.size(); ++i)
        out.values()[i] = c.values()[i].real();
    return out;
}

void fft_rows(Array2<Complex>& rows, bool inverse) {
    const Dims2 d = rows.dims();
    FftwBuffer in = allocate(d.size());
    FftwBuffer out = allocate(d.size());
    std::memcpy(in.get(), rows.values().data(), sizeof(Complex) * d.size());
    execute({d.nx}, d.ny, inverse ? FFTW_BACKWARD : FFTW_FORWARD, in.get(), out.get());
    const double scale = inverse ? 1.0 / d.nx : 1.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        rows.values()[i] = out[i] * scale;
}

Complex sample_trilinear(const Spectrum3& s, double gx, double gy, double gz) {
    const Dims3 d = s.dims();
    const int ux = upper_coordinate(d.nx), uy = upper_coordinate(d.ny), uz = upper_coordinate(d.nz);
    if (!(gx >= 0 && gy >= 0 && gz >= 0 && gx <= ux && gy <= uy && gz <= uz))
        return {0.0, 0.0};
    const int x0 = static_cast<int>(std::floor(gx));
    const int y0 = static_cast<int>(std::floor(gy));
    const int z0 = static_cast<int>(std::floor(gz));
    const double fx = gx - x0, fy = gy - y0, fz = gz - z0;
    const double wx[2] = {1.0 - fx, fx};
    const double wy[2] = {1.0 - fy, fy};
    const double wz[2] = {1.0 - fz, fz};

    Complex acc{0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
        if (wz[k] == 0.0)
            continue;
        const int z = wrap_nyquist(z0 + k, d.nz);
        for (int j = 0; j < 2; ++j) {
            if (wy[j] == 0.0)
                continue;
            const int y = wrap_nyquist(y0 + j, d.ny);
            for (int i = 0; i < 2; ++i) {
                if (wx[i] == 0.0)
                    continue;
                const int x = wrap_nyquist(x0 + i, d.nx);
                acc += (wx[i] * wy[j] * wz[k]) * s(x, y, z);
            }
        }
    }
    return acc;
}

Spectrum2 extract_central_slice(const Spectrum3& s, const RotationMatrix& r) {
    const Dims3 d = s.dims();
    const int cx = center_index(d.nx), cy = center_index(d.ny), cz = center_index(d.nz);
    const bool even_x = d.nx % 2 == 0, even_y = d.ny % 2 == 0;

    // Frequency (cycles/sample) -> fractional array coordinate of the 3D grid.
    auto sample_at = [&](double kx, double ky) {
        const Vec3 f = r.apply({kx, ky, 0.0});
        return sample_trilinear(s, f.x * d.nx + cx, f.y * d.ny + cy, f.z * d.nz + cz);
    };

    Spectrum2 out(Dims2{d.nx, d.ny});
    for (int j = 0; j < d.ny; ++j) {
        const double ky = static_cast<double>(j - cy) / d.ny;
        const bool nyq_y = even_y && j == 0;
        for (int i = 0; i < d.nx; ++i) {
            const double kx = static_cast<double>(i - cx) / d.nx;
            const bool nyq_x = even_x && i == 0;
            if (!nyq_x && !nyq_y) {
                out(i, j) = sample_at(kx, ky);
                continue;
            }
            // Average over the periodic aliases (+n/2 and -n/2) of Nyquist components.
            Complex acc = sample_at(kx, ky);
            int terms = 1;
            if (nyq_x) {
                acc += sample_at(-kx, ky);
                ++terms;
            }
            if (nyq_y) {
                acc += sample_at(kx, -ky);
                ++terms;
            }
            if (nyq_x && nyq_y) {
                acc += sample_at(-kx, -ky);
                ++terms;
            }
            out(i, j) = acc / static_cast<double>(terms);
        }
    }
    return out;
}

} // namespace resire
