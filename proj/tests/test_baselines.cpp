#include <catch_amalgamated.hpp>

#include <cmath>

#include "resire/baselines.hpp"
#include "resire/errors.hpp"
#include "resire/metrics.hpp"
#include "resire/phantom.hpp"
#include "test_helpers.hpp"

using namespace resire;

namespace {

SirtConfig sirt(int iterations, double t = 1.0) {
    SirtConfig cfg;
    cfg.iterations = iterations;
    cfg.relaxation = t;
    return cfg;
}

// Analytic sinogram of a disk of radius r in every (x, z) slice: the chord
// length 2 sqrt(r^2 - x^2) at each detector pixel, the same for every angle.
ProjectionStack disk_sinogram(int n, int ny, double r, const TiltSeries& angles) {
    Projection chord(Dims2{n, ny});
    const int c = center_index(n);
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < n; ++x) {
            const double u = x - c;
            chord(x, y) = std::abs(u) < r ? 2.0 * std::sqrt(r * r - u * u) : 0.0;
        }
    ProjectionStack s;
    s.angles = angles;
    s.projections.assign(angles.size(), chord);
    return s;
}

} // namespace

TEST_CASE("SirtConfig::validate") {
    CHECK_NOTHROW(sirt(1, 1.0).validate());
    CHECK_NOTHROW(sirt(1, 0.5).validate());
    CHECK_THROWS_AS(sirt(0).validate(), InvalidArgument);
    CHECK_THROWS_AS(sirt(1, 0.0).validate(), InvalidArgument);
    CHECK_THROWS_AS(sirt(1, 1.5).validate(), InvalidArgument);
}

TEST_CASE("single-axis restriction") {
    const ProjectionStack tilted{{Projection({8, 8}), Projection({8, 8})}, {{0, 10, 0}, {5, 20, 0}}};
    CHECK_THROWS_AS(sirt_solve(tilted, {8, 8, 8}, sirt(1)), UnsupportedConfiguration);
    CHECK_THROWS_AS(fbp_solve(tilted, {8, 8, 8}), UnsupportedConfiguration);
    const ProjectionStack rolled{{Projection({8, 8})}, {{0, 10, 1}}};
    CHECK_THROWS_AS(sirt_solve(rolled, {8, 8, 8}, sirt(1)), UnsupportedConfiguration);
    CHECK_NOTHROW(require_single_axis({{0, -70, 0}, {0, 70, 0}}, "test"));
}

TEST_CASE("sirt_solve: zero stack gives zero volume") {
    const ProjectionStack stack{{Projection({8, 8}), Projection({8, 8})}, {{0, -30, 0}, {0, 30, 0}}};
    const auto [v, trace] = sirt_solve(stack, {8, 8, 8}, sirt(3));
    CHECK(max_abs(v.values()) == 0.0);
    CHECK(trace.size() == 3);
}

TEST_CASE("sirt_solve: one iteration solves a z-constant object at zero tilt") {
    const Dims3 d{8, 6, 5};
    const Projection layer = test::random_projection({8, 6}, 50, 0.0, 1.0);
    Volume v(d);
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x)
                v(x, y, z) = layer(x, y);
    const ProjectionStack stack{{forward_project_real(v, EulerTriple{})}, {{0, 0, 0}}};
    const auto [o, trace] = sirt_solve(stack, d, sirt(1));
    CHECK(test::max_abs_diff(o, v) < 1e-12);
}

TEST_CASE("sirt_solve: normalized ones residual reproduces ones on covered pixels") {
    // With b = 2 A(1) the first update from zero is t * C * A^T(2 W / W) = 2 on every covered voxel.
    const Dims3 d{12, 4, 12};
    const TiltSeries angles = tilt_range(-45, 45, 15);
    const Volume ones(d, 1.0);
    ProjectionStack stack;
    stack.angles = angles;
    for (const auto& e : angles) {
        Projection w = forward_project_real(ones, e);
        for (double& x : w.values())
            x *= 2.0;
        stack.projections.push_back(w);
    }
    const auto [o, trace] = sirt_solve(stack, d, sirt(1));
    for (double x : o.values())
        if (x != 0.0)
            REQUIRE(std::abs(x - 2.0) < 1e-12);
    CHECK(std::abs(o(6, 2, 6) - 2.0) < 1e-12);
}

TEST_CASE("sirt_solve: noiseless ball reaches a small R-factor") {
    const Preset preset = load_preset("ball32");
    const Volume ball = make_vesicle_phantom(preset.phantom);
    const TiltSeries angles = tilt_range(-70, 70, 3.5);
    const ProjectionStack stack = test::exact_stack(ball, angles);
    const auto [v, trace] = sirt_solve(stack, ball.dims(), sirt(200));
    REQUIRE(trace.size() == 200);
    CHECK(rfactor(stack, v, {2.0, ball.dims()}).aggregate < 0.06);
}

TEST_CASE("ramp_filter: shape of the response") {
    const int n = 32;
    const auto ram = ramp_filter(n, FbpFilter::RamLak);
    const auto ham = ramp_filter(n, FbpFilter::HammingRamLak);
    REQUIRE(ram.size() == 64);
    CHECK(ram[0] > 0.0);
    CHECK(ram[0] < 0.05);
    CHECK(std::abs(ram[32] - 1.0) < 0.02);
    for (int i = 1; i <= 32; ++i) {
        CHECK(ram[i] > ram[i - 1]);
        CHECK(std::abs(ram[i] - ram[64 - i]) < 1e-12);
        CHECK(ham[i] <= ram[i]);
    }
    CHECK(std::abs(ham[32] - 0.08 * ram[32]) < 1e-12);
}

TEST_CASE("fbp_solve: zero sinogram gives zero volume") {
    const ProjectionStack stack{{Projection({8, 8}), Projection({8, 8})}, {{0, -30, 0}, {0, 30, 0}}};
    CHECK(max_abs(fbp_solve(stack, {8, 8, 8}).values()) == 0.0);
}

TEST_CASE("fbp_solve: dense full-range sinogram of a disk recovers unit density inside the field of view") {
    const int n = 64;
    const double radius = 20;
    const ProjectionStack stack = disk_sinogram(n, 2, radius, tilt_range(0, 179, 1));
    REQUIRE(stack.count() == 180);
    const Volume rec = fbp_solve(stack, {n, 2, n});
    const int c = center_index(n);
    double num = 0, den = 0;
    for (int z = 0; z < n; ++z)
        for (int x = 0; x < n; ++x) {
            const double r = std::hypot(x - c, z - c);
            // Corners outside the inscribed circle miss rays at some angles.
            if (std::abs(r - radius) <= 2.0 || r > c - 1)
                continue;
            const double truth = r < radius ? 1.0 : 0.0;
            for (int y = 0; y < 2; ++y) {
                num += (rec(x, y, z) - truth) * (rec(x, y, z) - truth);
                den += truth * truth;
            }
        }
    CHECK(std::sqrt(num / den) < 0.05);
}

TEST_CASE("fbp_solve: linear in the sinogram") {
    const Dims3 d{16, 4, 16};
    const TiltSeries angles = tilt_range(-60, 60, 20);
    ProjectionStack a, b, mix;
    a.angles = b.angles = mix.angles = angles;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        a.projections.push_back(test::random_projection({16, 4}, 60 + i));
        b.projections.push_back(test::random_projection({16, 4}, 80 + i));
        Projection m(Dims2{16, 4});
        for (std::size_t p = 0; p < m.size(); ++p)
            m.values()[p] = 2.5 * a.projections[i].values()[p] - 0.75 * b.projections[i].values()[p];
        mix.projections.push_back(m);
    }
    for (const FbpFilter f : {FbpFilter::RamLak, FbpFilter::HammingRamLak}) {
        const Volume fa = fbp_solve(a, d, {f}), fb = fbp_solve(b, d, {f});
        Volume expected(d);
        for (std::size_t i = 0; i < expected.size(); ++i)
            expected.values()[i] = 2.5 * fa.values()[i] - 0.75 * fb.values()[i];
        CHECK(test::relative_l2(fbp_solve(mix, d, {f}), expected) < 1e-10);
    }
}

TEST_CASE("missing-wedge ball: FBP R-factor exceeds RESIRE") {
    const Volume ball = test::smooth_ball(32, 10);
    const TiltSeries angles = tilt_range(-70, 70, 7);
    const ProjectionStack stack = test::exact_stack(ball, angles);
    const ProjectorConfig pc{2.0, ball.dims()};
    SolverConfig cfg;
    cfg.iterations = 100;
    const double resire_rf = rfactor(stack, resire_solve(stack, ball.dims(), cfg).first, pc).aggregate;
    const double fbp_rf = rfactor(stack, fbp_solve(stack, ball.dims()), pc).aggregate;
    CHECK(fbp_rf > resire_rf);
}
