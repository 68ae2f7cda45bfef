#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rf2d/inequalities.hpp"
#include "rf2d/oracles.hpp"

using namespace rf2d;

namespace {

constexpr double kPi = std::numbers::pi;

ConformalSurface flat_torus(unsigned n) {
    const auto tb = BaseSurface::torus(n);
    return ConformalSurface(tb, Field(tb->node_count, 0.0), 0.0);
}

ConformalSurface round_sphere(unsigned level) {
    const auto sb = BaseSurface::sphere(level);
    return ConformalSurface(sb, Field(sb->node_count, 0.0), 0.0);
}

}  // namespace

TEST_CASE("constant bundle formulas and presence rules") {
    const LogSobolevConstants c = assemble_constants(0.4, 9.0, -1.2, 0.5);
    CHECK(c.a1 == doctest::Approx(0.4 + 1.0 / 3.0 + 0.3).epsilon(1e-14));
    CHECK(c.a2 == 1.0);
    REQUIRE(c.delta0.has_value());
    CHECK(*c.delta0 == doctest::Approx(1.0 / (0.5 + c.a1)).epsilon(1e-14));
    CHECK(*c.b0 == doctest::Approx(std::log(1 + c.a1 / 0.5) - 1).epsilon(1e-14));

    const LogSobolevConstants flat = assemble_constants(0.35, 39.5, 0.0, 0.0);
    CHECK(!flat.delta0.has_value());
    CHECK(!flat.b0.has_value());

    // Monotone dependence: a1 nonincreasing in min R⁻, δ0 and B0 decreasing in λ0.
    CHECK(assemble_constants(0.4, 9.0, -2.0, 0.5).a1 > c.a1);
    CHECK(*assemble_constants(0.4, 9.0, -1.2, 0.7).delta0 < *c.delta0);
    CHECK(*assemble_constants(0.4, 9.0, -1.2, 0.7).b0 < *c.b0);
}

TEST_CASE("constants_for reproduces the sphere reference numbers") {
    const ConformalSurface s = round_sphere(4);
    const LogSobolevConstants c =
        constants_for(s, oracle::analytic_cni(oracle::Family::RoundSphere));
    CHECK(c.lambda0 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(c.a1 == doctest::Approx(0.6810).epsilon(1e-3));
    REQUIRE(c.delta0.has_value());
    CHECK(*c.delta0 == doctest::Approx(0.8467).epsilon(1e-3));
    CHECK(*c.b0 == doctest::Approx(-0.1404).epsilon(1e-2));

    const ConformalSurface t = flat_torus(48);
    const LogSobolevConstants ct = constants_for(t, oracle::analytic_cni(oracle::Family::FlatTorus));
    CHECK(!ct.delta0.has_value());
}

TEST_CASE("isoperimetric estimator hits the analytic values on model bases") {
    const ConformalSurface t = flat_torus(64);
    const double est_t = neumann_isoperimetric_estimate(t);
    const double ref_t = oracle::analytic_cni(oracle::Family::FlatTorus);
    CHECK(est_t >= 0.98 * ref_t);
    CHECK(est_t <= 1.02 * ref_t);

    const ConformalSurface s = round_sphere(4);
    const double est_s = neumann_isoperimetric_estimate(s);
    const double ref_s = oracle::analytic_cni(oracle::Family::RoundSphere);
    CHECK(est_s >= 0.98 * ref_s);
    CHECK(est_s <= 1.02 * ref_s);

    // Scale invariance under phi -> phi + c.
    Field shifted(t.node_count(), 0.9);
    const double est_shift =
        neumann_isoperimetric_estimate(ConformalSurface(t.base, shifted, 0.0));
    CHECK(std::abs(est_shift - est_t) <= 1e-8);
}

TEST_CASE("poincare deficits") {
    const ConformalSurface t = flat_torus(96);
    const double c_ni = oracle::analytic_cni(oracle::Family::FlatTorus);
    Field cst(t.node_count(), 5.0);
    CHECK(poincare_deficit(t, cst, c_ni) == doctest::Approx(0.0).epsilon(0.0));

    Field sinx(t.node_count());
    for (std::size_t i = 0; i < t.node_count(); ++i) sinx[i] = std::sin(t.base->xs[i]);
    // 0.3536·8π - π√2 ≈ 4.443.
    CHECK(poincare_deficit(t, sinx, c_ni) == doctest::Approx(4.443).epsilon(0.01));

    const ConformalSurface s = round_sphere(4);
    Field z(s.node_count());
    for (std::size_t i = 0; i < s.node_count(); ++i) z[i] = s.base->pos[i][2];
    CHECK(poincare_deficit(s, z, oracle::analytic_cni(oracle::Family::RoundSphere)) >= 0.0);
}

TEST_CASE("jensen entropy check") {
    const ConformalSurface t = flat_torus(48);
    const double c_ni = oracle::analytic_cni(oracle::Family::FlatTorus);
    const double vol = volume(t);
    Field cst(t.node_count(), 1.0 / vol);
    const JensenReport eq = jensen_entropy_check(t, cst, c_ni);
    CHECK(std::abs(eq.jensen_deficit) <= 1e-10);
    CHECK(std::abs(eq.l1_sobolev_deficit) <= 1e-10);

    // A normalized bump has strictly positive Jensen deficit.
    Field bump(t.node_count());
    for (std::size_t i = 0; i < t.node_count(); ++i) {
        const double dx = std::min(t.base->xs[i], 2 * kPi - t.base->xs[i]);
        const double dy = std::min(t.base->ys[i], 2 * kPi - t.base->ys[i]);
        bump[i] = std::exp(-(dx * dx + dy * dy));
    }
    const double l1 = l1_norm(t, bump);
    for (auto& v : bump) v /= l1;
    const JensenReport jr = jensen_entropy_check(t, bump, c_ni);
    CHECK(jr.jensen_deficit > 0.0);
    CHECK(jr.l1_sobolev_deficit > -1e-6);

    CHECK_THROWS_AS((void)jensen_entropy_check(t, Field(t.node_count(), 1.0), c_ni),
                    std::invalid_argument);
}

TEST_CASE("battery members are unit normalized and labeled") {
    const ConformalSurface s = round_sphere(3);
    const TestFunctionBattery bat = build_battery(s, 123, nullptr);
    CHECK(bat.members.size() >= 13);
    for (const auto& [label, u] : bat.members) {
        CHECK(!label.empty());
        CHECK(std::abs(mass_norm_sq(s, u) - 1.0) <= 1e-10);
    }
}

TEST_CASE("log-Sobolev deficit: reference value and sweeps") {
    const ConformalSurface s = round_sphere(4);
    const LogSobolevConstants c =
        constants_for(s, oracle::analytic_cni(oracle::Family::RoundSphere));
    Field u(s.node_count(), 1.0);
    u = normalized_l2(s, u);
    CHECK(logsobolev_deficit(s, c, u, 1.0, 0.0) == doctest::Approx(-6.755).epsilon(0.01));

    // −ln σ dominates as σ→0⁺ and σE dominates as σ→∞.
    Field bump = build_battery(s, 9, nullptr).members.back().second;
    CHECK(logsobolev_deficit(s, c, bump, 1e-9, 0.0) < -10.0);
    CHECK(logsobolev_deficit(s, c, bump, 1e9, 0.0) < -10.0);

    const SpectralResult spec = lambda0(s, 1e-8);
    const TestFunctionBattery bat = build_battery(s, 9, &spec.eigenfunction);
    double worst = -1e300;
    for (const auto& [label, m] : bat.members)
        for (double sg : default_sigma_grid())
            worst = std::max(worst, logsobolev_deficit(s, c, m, sg, 0.0));
    CHECK(worst <= 1e-6);

    CHECK_THROWS_AS((void)logsobolev_deficit(s, c, Field(s.node_count(), 1.0), 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("theorem B deficit and the strong-form identity") {
    const ConformalSurface s = round_sphere(4);
    const LogSobolevConstants c =
        constants_for(s, oracle::analytic_cni(oracle::Family::RoundSphere));
    REQUIRE(c.delta0.has_value());
    Field u(s.node_count(), 1.0);
    u = normalized_l2(s, u);
    CHECK(logsobolev_deficit_B(s, c, u, *c.delta0, 0.0) <= 0.0);
    CHECK_THROWS_AS((void)logsobolev_deficit_B(s, c, u, *c.delta0 / 8.0, 0.0),
                    std::invalid_argument);

    const double energy = schrodinger_energy(s, u);
    CHECK(theorem_b_rhs(c, energy, 1.0 / energy) ==
          doctest::Approx(strong_b_rhs(c, energy)).epsilon(1e-12));

    const LogSobolevConstants flat = assemble_constants(0.35, 39.5, 0.0, 0.0);
    CHECK_THROWS_AS((void)logsobolev_deficit_B(s, flat, u, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("grid minimum of the theorem-A right side dominates the strong form") {
    const ConformalSurface s = round_sphere(3);
    const LogSobolevConstants c =
        constants_for(s, oracle::analytic_cni(oracle::Family::RoundSphere));
    const TestFunctionBattery bat = build_battery(s, 31, nullptr);
    for (double t : {0.0, 0.2}) {
        for (const auto& [label, u] : bat.members) {
            const double energy = schrodinger_energy(s, u);
            double grid_min = 1e300;
            for (double sg : default_sigma_grid())
                grid_min = std::min(grid_min, theorem_a_rhs(c, energy, sg, t));
            CHECK(grid_min >= strong_a_rhs(c, energy, t) - 1e-9);
        }
    }
}

TEST_CASE("cbar evaluates the displayed constant") {
    LogSobolevConstants c;
    c.a1 = 0.681037;
    c.a2 = 1.0;
    c.min_r_minus = 0.0;
    const double direct = cbar(4.0, 1.0, c);
    CHECK(direct == doctest::Approx(2.0 * std::exp(1.0 + 4 * 0.681037 + 0.5)).epsilon(1e-12));
    CHECK(direct == doctest::Approx(137.0).epsilon(0.01));  // ≈ 1.37e2

    // min R⁻ = 0 removes the curvature term.
    LogSobolevConstants neg = c;
    neg.min_r_minus = -2.0;
    CHECK(cbar(4.0, 1.0, neg) ==
          doctest::Approx(direct * std::exp((3.0 / 16.0) * 0.5)).epsilon(1e-12));

    // p → ∞ limits of the p-dependent factors.
    CHECK(std::pow(2.0, 2.0 / (1e9 - 2.0)) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(cbar(1e9, 0.0, c) ==
          doctest::Approx(std::exp(0.5 + 2 * c.a1 + 0.5)).epsilon(1e-6));

    CHECK_THROWS_AS((void)cbar(2.0, 1.0, c), std::invalid_argument);
    c.lambda0 = 0.5;
    c.b0 = -0.14046;
    CHECK(cbar_b(4.0, c) ==
          doctest::Approx(2.0 * std::exp(1.0 - 0.5 * 0.14046)).epsilon(1e-10));
}

TEST_CASE("adversarial ascent finds no counterexample") {
    // Large σ on the flat torus: the constant function is the maximizer and
    // G(const) = -ln vol.
    const ConformalSurface t = flat_torus(48);
    const LogSobolevConstants ct =
        constants_for(t, oracle::analytic_cni(oracle::Family::FlatTorus));
    const TestFunctionBattery bat_t = build_battery(t, 21, nullptr);
    const AscentResult big = adversarial_logsobolev_max(t, ct, 16.0, 0.0, bat_t);
    CHECK(big.objective <= -std::log(volume(t)) + 1e-6);
    CHECK(big.objective >= -std::log(volume(t)) - 0.05);
    CHECK(big.deficit <= 1e-6);

    const ConformalSurface s = round_sphere(3);
    const LogSobolevConstants cs =
        constants_for(s, oracle::analytic_cni(oracle::Family::RoundSphere));
    const AscentResult small = adversarial_logsobolev_max(s, cs, 0.1, 0.0, build_battery(s, 22, nullptr));
    CHECK(small.deficit <= 1e-6);
}

TEST_CASE("sobolev ratio track") {
    // Static flat torus: the constant member pins measured_B from below.
    const auto tb = BaseSurface::torus(48);
    ConformalSurface s0(tb, Field(tb->node_count, 0.0), 0.0);
    StepControl ctrl;
    ctrl.t_end = 0.2;
    const FlowTrajectory traj = run_flow(s0, ctrl, 0.1);
    const double p = 4.0;
    const SobolevTrack track = sobolev_ratio_track(traj, p, 5, std::nullopt);
    REQUIRE(!track.rows.empty());
    const double vol = volume(s0);
    for (const auto& row : track.rows)
        CHECK(row.measured_b >= std::pow(vol, 2.0 / p - 1.0) - 1e-9);
    CHECK(!track.unbounded_flag);

    CHECK_THROWS_AS((void)sobolev_ratio_track(traj, 1.5, 5, std::nullopt), std::invalid_argument);
}
