#include "resire/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "resire/errors.hpp"
#include "resire/keyvalue.hpp"

namespace resire {

namespace detail {
const std::map<std::string, std::string>& embedded_presets();
}

bool EllipsoidShell::contains(double u, double v, double w) const {
    const double dx = u - center.x, dy = v - center.y, dz = w - center.z;
    const auto inside = [&](double rx, double ry, double rz) {
        return (dx / rx) * (dx / rx) + (dy / ry) * (dy / ry) + (dz / rz) * (dz / rz) <= 1.0;
    };
    if (!inside(radii.x, radii.y, radii.z))
        return false;
    const double ix = radii.x - thickness, iy = radii.y - thickness, iz = radii.z - thickness;
    if (ix <= 0 || iy <= 0 || iz <= 0)
        return true;
    const double q = (dx / ix) * (dx / ix) + (dy / iy) * (dy / iy) + (dz / iz) * (dz / iz);
    return q >= 1.0;
}

void PhantomSpec::validate() const {
    if (size < 1)
        throw InvalidArgument("phantom size must be positive");
    if (!(smoothing_sigma >= 0.0))
        throw InvalidArgument("smoothing sigma must be >= 0");
    const double safe = 0.45 * size;
    for (std::size_t i = 0; i < shells.size(); ++i) {
        const auto& s = shells[i];
        if (!(s.radii.x > 0 && s.radii.y > 0 && s.radii.z > 0 && s.thickness > 0))
            throw InvalidArgument("shell " + std::to_string(i) + ": radii and thickness must be positive");
        const double reach = std::hypot(s.center.x, s.center.y, s.center.z) + std::max({s.radii.x, s.radii.y, s.radii.z});
        if (reach > safe)
            throw InvalidArgument("shell " + std::to_string(i) + " reaches radius " + format_double(reach) +
                                  " beyond the safe radius " + format_double(safe));
    }
}

namespace {

EllipsoidShell parse_shell(const std::string& key, const std::string& text) {
    std::istringstream in(text);
    std::vector<double> f;
    std::string token;
    while (in >> token)
        f.push_back(parse_double(token));
    if (f.size() != 8)
        throw FormatError("key '" + key + "': expected 8 numbers (center, radii, thickness, density)", 0);
    return {{f[0], f[1], f[2]}, {f[3], f[4], f[5]}, f[6], f[7]};
}

std::string shell_text(const EllipsoidShell& s) {
    std::string out;
    for (double v : {s.center.x, s.center.y, s.center.z, s.radii.x, s.radii.y, s.radii.z, s.thickness, s.density}) {
        if (!out.empty())
            out += ' ';
        out += format_double(v);
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double total = 0;
    for (int i = -radius; i <= radius; ++i) {
        const double g = std::exp(-0.5 * (i / sigma) * (i / sigma));
        k[static_cast<std::size_t>(i + radius)] = g;
        total += g;
    }
    for (double& g : k)
        g /= total;
    return k;
}

} // namespace

Preset Preset::from_text(std::string_view text) {
    const KeyValueDoc doc = KeyValueDoc::parse(text);
    std::set<std::string> known = {"version", "size", "smoothing_sigma", "seed", "noise_sigma_fraction", "tilt"};
    for (const auto& [key, value] : doc.entries())
        if (key.rfind("shell", 0) == 0)
            known.insert(key);
    doc.require_known(known);
    if (doc.contains("version") && doc.get_int("version") != 1)
        throw FormatError("unsupported preset version " + doc.get("version"), 0);

    Preset p;
    p.phantom.size = static_cast<int>(doc.get_int("size"));
    if (doc.contains("smoothing_sigma"))
        p.phantom.smoothing_sigma = doc.get_double("smoothing_sigma");
    if (doc.contains("seed"))
        p.phantom.seed = static_cast<std::uint64_t>(doc.get_int("seed"));
    for (int i = 0;; ++i) {
        const std::string key = "shell" + std::to_string(i);
        if (!doc.contains(key))
            break;
        p.phantom.shells.push_back(parse_shell(key, doc.get(key)));
    }
    for (const auto& [key, value] : doc.entries()) {
        if (key.rfind("shell", 0) == 0) {
            long long idx = -1;
            try {
                idx = parse_int(key.substr(5));
            } catch (const InvalidArgument&) {
            }
            if (idx < 0 || static_cast<std::size_t>(idx) >= p.phantom.shells.size())
                throw FormatError("shell keys must be numbered contiguously from shell0; found '" + key + "'", 0);
        }
    }
    if (doc.contains("noise_sigma_fraction"))
        p.noise.sigma_fraction = doc.get_double("noise_sigma_fraction");
    p.noise.seed = p.phantom.seed;
    if (doc.contains("tilt")) {
        std::istringstream in(doc.get("tilt"));
        std::string a, b, c;
        if (!(in >> a >> b >> c))
            throw FormatError("key 'tilt': expected 'start end step'", 0);
        p.tilt = {parse_double(a), parse_double(b), parse_double(c)};
    }
    p.phantom.validate();
    return p;
}

std::string Preset::to_text() const {
    std::string out = "version = 1\n";
    out += "size = " + std::to_string(phantom.size) + "\n";
    out += "smoothing_sigma = " + format_double(phantom.smoothing_sigma) + "\n";
    out += "seed = " + std::to_string(phantom.seed) + "\n";
    for (std::size_t i = 0; i < phantom.shells.size(); ++i)
        out += "shell" + std::to_string(i) + " = " + shell_text(phantom.shells[i]) + "\n";
    out += "noise_sigma_fraction = " + format_double(noise.sigma_fraction) + "\n";
    out += "tilt = " + format_double(tilt.start) + " " + format_double(tilt.end) + " " + format_double(tilt.step) + "\n";
    return out;
}

Preset load_preset(const std::string& name) {
    const auto& presets = detail::embedded_presets();
    const auto it = presets.find(name);
    if (it == presets.end())
        throw InvalidArgument("unknown phantom preset '" + name + "'");
    return Preset::from_text(it->second);
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : detail::embedded_presets())
        names.push_back(name);
    return names;
}

Volume gaussian_smooth(const Volume& v, double sigma) {
    if (sigma <= 0.0)
        return v;
    const std::vector<double> k = gaussian_kernel(sigma);
    const int radius = static_cast<int>(k.size() / 2);
    const Dims3 d = v.dims();
    Volume a = v;
    Volume b(d);
    // One pass per axis; `axis` selects the stride.
    for (int axis = 0; axis < 3; ++axis) {
        const int n = axis == 0 ? d.nx : axis == 1 ? d.ny : d.nz;
        for (int z = 0; z < d.nz; ++z)
            for (int y = 0; y < d.ny; ++y)
                for (int x = 0; x < d.nx; ++x) {
                    const int pos = axis == 0 ? x : axis == 1 ? y : z;
                    double acc = 0;
                    for (int t = -radius; t <= radius; ++t) {
                        const int q = pos + t;
                        if (q < 0 || q >= n)
                            continue;
                        const double val = axis == 0 ? a(q, y, z) : axis == 1 ? a(x, q, z) : a(x, y, q);
                        acc += k[static_cast<std::size_t>(t + radius)] * val;
                    }
                    b(x, y, z) = acc;
                }
        std::swap(a, b);
    }
    return a;
}

Volume make_vesicle_phantom(const PhantomSpec& spec) {
    spec.validate();
    const Dims3 d = spec.dims();
    Volume v(d);
    const int c = center_index(spec.size);
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x) {
                double value = 0;
                for (const auto& shell : spec.shells)
                    if (shell.contains(x - c, y - c, z - c))
                        value += shell.density;
                v(x, y, z) = value;
            }
    return gaussian_smooth(v, spec.smoothing_sigma);
}

TiltSeries tilt_range(double start_deg, double end_deg, double step_deg) {
    if (!std::isfinite(start_deg) || !std::isfinite(end_deg) || !std::isfinite(step_deg))
        throw InvalidArgument("tilt_range: values must be finite");
    if (!(step_deg > 0.0))
        throw InvalidArgument("tilt_range: step must be positive");
    if (end_deg < start_deg)
        throw InvalidArgument("tilt_range: end must not precede start");
    const auto count = static_cast<std::size_t>(std::floor((end_deg - start_deg) / step_deg + 1e-9)) + 1;
    TiltSeries series;
    series.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        series.push_back({0.0, start_deg + static_cast<double>(i) * step_deg, 0.0});
    return series;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t index)
    : engine_(splitmix64(seed + 0x9E3779B97F4A7C15ull * (index + 1))) {}

double GaussianStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    constexpr double kScale = 1.0 / 9007199254740992.0; // 2^-53
    double u = 0, v = 0, s = 0;
    do {
        u = 2.0 * static_cast<double>(engine_() >> 11) * kScale - 1.0;
        v = 2.0 * static_cast<double>(engine_() >> 11) * kScale - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

ProjectionStack simulate_stack(const Volume& v, const TiltSeries& angles, const NoiseSpec& noise,
                               const ProjectorConfig& cfg) {
    if (angles.empty())
        throw InvalidArgument("simulate_stack: tilt series is empty");
    if (!(noise.sigma_fraction >= 0.0))
        throw InvalidArgument("simulate_stack: noise sigma_fraction must be >= 0");
    ProjectionStack stack;
    stack.angles = angles;
    stack.projections = forward_project_all(v, angles, cfg);
    if (noise.sigma_fraction == 0.0)
        return stack;
    for (std::size_t i = 0; i < stack.projections.size(); ++i) {
        auto p = stack.projections[i].values();
        double total = 0;
        std::size_t positive = 0;
        for (double x : p)
            if (x > 0) {
                total += x;
                ++positive;
            }
        const double sigma = positive > 0 ? noise.sigma_fraction * total / static_cast<double>(positive) : 0.0;
        GaussianStream rng(noise.seed, i);
        for (double& x : p)
            x += sigma * rng.next();
    }
    return stack;
}

} // namespace resire
