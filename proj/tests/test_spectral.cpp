#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rf2d/inequalities.hpp"
#include "rf2d/spectral.hpp"

using namespace rf2d;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("rayleigh quotient reference values") {
    const auto tb = BaseSurface::torus(96);
    ConformalSurface flat(tb, Field(tb->node_count, 0.0), 0.0);
    Field ones(tb->node_count, 1.0);
    CHECK(std::abs(rayleigh_quotient(flat, ones)) < 1e-14);

    Field sinx(tb->node_count);
    for (std::size_t i = 0; i < tb->node_count; ++i) sinx[i] = std::sin(tb->xs[i]);
    CHECK(rayleigh_quotient(flat, sinx) == doctest::Approx(1.0).epsilon(0.01));

    const auto sb = BaseSurface::sphere(3);
    ConformalSurface sphere(sb, Field(sb->node_count, 0.0), 0.0);
    Field sones(sb->node_count, 1.0);
    CHECK(rayleigh_quotient(sphere, sones) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS((void)rayleigh_quotient(flat, Field(tb->node_count, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("lambda0 on the model surfaces") {
    const auto tb = BaseSurface::torus(96);
    ConformalSurface flat(tb, Field(tb->node_count, 0.0), 0.0);
    const SpectralResult rt = lambda0(flat, 1e-10);
    CHECK(std::abs(rt.lambda0) <= 1e-8);
    CHECK(std::abs(mass_norm_sq(flat, rt.eigenfunction) - 1.0) < 1e-10);

    const auto sb = BaseSurface::sphere(4);
    ConformalSurface sphere(sb, Field(sb->node_count, 0.0), 0.0);
    const SpectralResult rs = lambda0(sphere, 1e-10);
    CHECK(rs.lambda0 == doctest::Approx(0.5).epsilon(1e-3));

    // Shrinking round sphere: spatially constant phi at the model value.
    for (double t : {0.1, 0.25, 0.4}) {
        ConformalSurface st(sb, Field(sb->node_count, 0.5 * std::log(1 - 2 * t)), t);
        const SpectralResult r = lambda0(st, 1e-10);
        CHECK(r.lambda0 == doctest::Approx(1.0 / (2 * (1 - 2 * t))).epsilon(0.01));
    }
}

TEST_CASE("lambda0 is negative for nonflat torus metrics") {
    const auto tb = BaseSurface::torus(96);
    Field phi(tb->node_count);
    for (std::size_t i = 0; i < tb->node_count; ++i) phi[i] = 0.2 * std::sin(tb->xs[i]);
    const SpectralResult r = lambda0(ConformalSurface(tb, phi, 0.0), 1e-9);
    CHECK(r.lambda0 < -1e-6);
    CHECK(r.residual <= 1e-9);
    // Ground state is sign-fixed with nonnegative mean.
    ConformalSurface s(tb, phi, 0.0);
    CHECK(mean(s, r.eigenfunction) >= 0.0);
    CHECK(std::abs(rayleigh_quotient(s, r.eigenfunction) - r.lambda0) <= r.residual + 1e-12);
}

TEST_CASE("conformal scale law for lambda0") {
    const auto tb = BaseSurface::torus(48);
    Field phi(tb->node_count);
    for (std::size_t i = 0; i < tb->node_count; ++i)
        phi[i] = 0.15 * std::sin(tb->xs[i]) * std::sin(tb->ys[i]);
    const double l0 = lambda0(ConformalSurface(tb, phi, 0.0), 1e-11).lambda0;
    Field phic = phi;
    for (auto& v : phic) v += 0.8;
    const double lc = lambda0(ConformalSurface(tb, phic, 0.0), 1e-11).lambda0;
    CHECK(lc == doctest::Approx(std::exp(-1.6) * l0).epsilon(1e-6));
}

TEST_CASE("variational bound over the battery") {
    const auto tb = BaseSurface::torus(48);
    Field phi(tb->node_count);
    for (std::size_t i = 0; i < tb->node_count; ++i)
        phi[i] = 0.2 * std::cos(tb->xs[i]) + 0.1 * std::sin(2 * tb->ys[i]);
    ConformalSurface s(tb, phi, 0.0);
    const SpectralResult r = lambda0(s, 1e-10);
    const TestFunctionBattery bat = build_battery(s, 77, &r.eigenfunction);
    for (const auto& [label, u] : bat.members)
        CHECK(r.lambda0 <= rayleigh_quotient(s, u) + 1e-9);
}

TEST_CASE("log density clamps the ground state") {
    const auto tb = BaseSurface::torus(16);
    ConformalSurface s(tb, Field(tb->node_count, 0.0), 0.0);
    Field u(tb->node_count, 0.5);
    u[0] = 0.0;  // clamped to 1e-12 * max
    const Field f = log_density_from_ground_state(s, u);
    CHECK(f[1] == doctest::Approx(-2 * std::log(0.5)).epsilon(1e-14));
    CHECK(f[0] == doctest::Approx(-2 * std::log(1e-12 * 0.5)).epsilon(1e-12));
    CHECK_THROWS_AS((void)log_density_from_ground_state(s, Field(tb->node_count, 0.0)),
                    std::invalid_argument);
}
