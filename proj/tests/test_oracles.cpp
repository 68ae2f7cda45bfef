#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rf2d/oracles.hpp"

using namespace rf2d::oracle;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("round sphere closed forms") {
    const ModelSolution m{Family::RoundSphere, 1.0};
    CHECK(eval(m, Quantity::Volume, 0.25) == doctest::Approx(2 * kPi).epsilon(1e-14));
    CHECK(eval(m, Quantity::Lambda0, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eval(m, Quantity::Lambda0, 0.25) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eval(m, Quantity::ScalarCurvature, 0.4) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(eval(m, Quantity::ExtinctionTime, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS((void)eval(m, Quantity::Volume, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)eval(m, Quantity::Volume, -0.1), std::invalid_argument);
}

TEST_CASE("flat torus closed forms") {
    const ModelSolution m{Family::FlatTorus, 2 * kPi};
    CHECK(eval(m, Quantity::Lambda0, 3.0) == 0.0);
    CHECK(eval(m, Quantity::Volume, 1.0) == doctest::Approx(4 * kPi * kPi).epsilon(1e-14));
    CHECK_THROWS_AS((void)eval(m, Quantity::ExtinctionTime, 0.0), std::invalid_argument);
}

TEST_CASE("dimensional consistency under g -> c^2 g") {
    const double c = 1.7;
    const ModelSolution unit{Family::RoundSphere, 1.0};
    const ModelSolution scaled{Family::RoundSphere, c};
    CHECK(eval(scaled, Quantity::Volume, 0.0) ==
          doctest::Approx(c * c * eval(unit, Quantity::Volume, 0.0)).epsilon(1e-12));
    CHECK(eval(scaled, Quantity::Lambda0, 0.0) ==
          doctest::Approx(eval(unit, Quantity::Lambda0, 0.0) / (c * c)).epsilon(1e-12));
    CHECK(eval(scaled, Quantity::ExtinctionTime, 0.0) ==
          doctest::Approx(c * c * eval(unit, Quantity::ExtinctionTime, 0.0)).epsilon(1e-12));
}

TEST_CASE("isoperimetric constants come from the cut sweeps") {
    CHECK(sphere_cap_sweep_cni() == doctest::Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-6));
    CHECK(torus_band_sweep_cni(2 * kPi) == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-6));
    CHECK(torus_band_sweep_cni(1.0) == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-6));
    CHECK(analytic_cni(Family::RoundSphere) ==
          doctest::Approx(sphere_cap_sweep_cni()).epsilon(1e-6));
    CHECK(analytic_cni(Family::FlatTorus) ==
          doctest::Approx(torus_band_sweep_cni(2 * kPi)).epsilon(1e-6));
}

TEST_CASE("cap area formula") {
    CHECK(sphere_cap_area(1.0, kPi) == doctest::Approx(4 * kPi).epsilon(1e-12));
    CHECK(sphere_cap_area(1.0, kPi / 2) == doctest::Approx(2 * kPi).epsilon(1e-12));
    // The ratio at the largest gated radius r = rho/sqrt(2).
    const double ratio = sphere_cap_area(1.0, 1.0 / std::sqrt(2.0)) / (0.5);
    CHECK(ratio == doctest::Approx(3.0125).epsilon(1e-3));
}
