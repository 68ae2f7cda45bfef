#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rf2d/flow.hpp"
#include "rf2d/spectral.hpp"

using namespace rf2d;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("the flat torus is a fixed point of the flow") {
    const auto tb = BaseSurface::torus(32);
    ConformalSurface s(tb, Field(tb->node_count, 0.0), 0.0);
    StepControl ctrl;
    ctrl.t_end = 10.0;
    const ConformalSurface next = flow_step(s, ctrl);
    CHECK(next.time_stamp > 0.0);
    for (std::size_t i = 0; i < tb->node_count; i += 41) CHECK(next.phi[i] == 0.0);
}

TEST_CASE("round sphere follows the exact shrinking solution") {
    const auto sb = BaseSurface::sphere(3);
    ConformalSurface s0(sb, Field(sb->node_count, 0.0), 0.0);
    StepControl ctrl;
    ctrl.t_end = 0.45;
    const FlowTrajectory traj = run_flow(s0, ctrl, 0.05);
    CHECK(traj.terminated_reason == FlowTermination::ReachedTEnd);
    for (const auto& s : traj.snapshots) {
        const double expect = 1.0 - 2.0 * s.time_stamp;
        for (std::size_t i = 0; i < sb->node_count; i += 101)
            CHECK(std::exp(2 * s.phi[i]) == doctest::Approx(expect).epsilon(0.005));
        // Spatially constant curvature within 1%.
        const CurvatureSummary c = scalar_curvature(s);
        CHECK(c.max_r - c.min_r <= 0.01 * std::abs(c.max_r));
        CHECK(c.max_r == doctest::Approx(2.0 / expect).epsilon(0.01));
    }
    // d(vol)/dt at t=0 is -8π within 1%.
    const double dvdt = (volume(traj.snapshots[1]) - volume(traj.snapshots[0])) /
                        (traj.snapshots[1].time_stamp - traj.snapshots[0].time_stamp);
    CHECK(dvdt == doctest::Approx(-8 * kPi).epsilon(0.01));
}

TEST_CASE("sphere run terminates by extinction near T = 1/2") {
    const auto sb = BaseSurface::sphere(3);
    ConformalSurface s0(sb, Field(sb->node_count, 0.0), 0.0);
    StepControl ctrl;
    ctrl.t_end = 1.0;
    const FlowTrajectory traj = run_flow(s0, ctrl, 0.05);
    CHECK(traj.terminated_reason == FlowTermination::Extinction);
    CHECK(std::abs(traj.extinction_time - 0.5) <= 0.01);
    CHECK(traj.extinction_time <= volume(traj.snapshots.front()) / (4 * kPi) + 1e-6);
    // Threshold crossings bracket the extinction and extrapolate to 1/2.
    CHECK(traj.threshold_time_1e2 < traj.threshold_time_1e3);
    const double t_rich =
        traj.threshold_time_1e3 + (traj.threshold_time_1e3 - traj.threshold_time_1e2) / 9.0;
    CHECK(t_rich == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("torus flow conserves volume and reaches t_end") {
    const auto tb = BaseSurface::torus(48);
    Field phi(tb->node_count);
    for (std::size_t i = 0; i < tb->node_count; ++i)
        phi[i] = 0.05 * std::sin(tb->xs[i]) * std::sin(tb->ys[i]);
    ConformalSurface s0(tb, phi, 0.0);
    StepControl ctrl;
    ctrl.t_end = 2.0;
    const FlowTrajectory traj = run_flow(s0, ctrl, 0.25);
    CHECK(traj.terminated_reason == FlowTermination::ReachedTEnd);
    CHECK(traj.final_time == doctest::Approx(2.0).epsilon(1e-12));
    const double vol0 = volume(traj.snapshots.front());
    for (const auto& s : traj.snapshots)
        CHECK(std::abs(volume(s) - vol0) <= 1e-4 * vol0);
    // Snapshots land on exact multiples of snapshot_every.
    CHECK(traj.snapshots[1].time_stamp == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("identical runs are bit identical") {
    const auto tb = BaseSurface::torus(32);
    Field phi(tb->node_count);
    for (std::size_t i = 0; i < tb->node_count; ++i) phi[i] = 0.1 * std::cos(tb->ys[i]);
    ConformalSurface s0(tb, phi, 0.0);
    StepControl ctrl;
    ctrl.t_end = 0.3;
    const FlowTrajectory a = run_flow(s0, ctrl, 0.1);
    const FlowTrajectory b = run_flow(s0, ctrl, 0.1);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t k = 0; k < a.snapshots.size(); ++k)
        CHECK(a.snapshots[k].phi == b.snapshots[k].phi);
}

TEST_CASE("step underflow is reported") {
    const auto tb = BaseSurface::torus(16);
    ConformalSurface s(tb, Field(tb->node_count, 0.0), 0.0);
    StepControl ctrl;
    ctrl.dt_min = 1.0;  // impossible to satisfy
    ctrl.t_end = 10.0;
    CHECK_THROWS_AS((void)flow_step(s, ctrl), StepUnderflowError);
    const FlowTrajectory traj = run_flow(s, ctrl, 1.0);
    CHECK(traj.terminated_reason == FlowTermination::StepUnderflow);
}

TEST_CASE("flow_step rejects a surface past extinction") {
    const auto tb = BaseSurface::torus(16);
    ConformalSurface s(tb, Field(tb->node_count, -4.0), 0.0);  // e^{2φ} ~ 3e-4
    StepControl ctrl;
    CHECK_THROWS_AS((void)flow_step(s, ctrl), std::invalid_argument);
}

TEST_CASE("backward conjugate solve on the static flat torus") {
    const auto tb = BaseSurface::torus(32);
    ConformalSurface s0(tb, Field(tb->node_count, 0.0), 0.0);
    StepControl ctrl;
    ctrl.t_end = 0.2;
    const FlowTrajectory traj = run_flow(s0, ctrl, 0.05);
    const double vol = volume(s0);
    const Field f1(tb->node_count, std::log(vol));
    const auto states = solve_conjugate_backward(traj, 0.2, f1);
    REQUIRE(states.size() == traj.snapshots.size());
    for (const auto& st : states) {
        CHECK(integrate(traj.surface_at(st.time), st.v) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 0; i < tb->node_count; i += 57)
            CHECK(st.f[i] == doctest::Approx(std::log(vol)).epsilon(1e-12));
    }
}

TEST_CASE("backward conjugate solve conserves mass and the F-energy grows") {
    const auto tb = BaseSurface::torus(48);
    Field phi(tb->node_count);
    for (std::size_t i = 0; i < tb->node_count; ++i)
        phi[i] = 0.05 * std::sin(tb->xs[i]) * std::sin(tb->ys[i]);
    ConformalSurface s0(tb, phi, 0.0);
    StepControl ctrl;
    ctrl.t_end = 0.05;
    const FlowTrajectory traj = run_flow(s0, ctrl, 1e-3);
    const double t1 = traj.end_time();
    const SpectralResult spec = lambda0(traj.snapshots.back(), 1e-9);
    const Field f1 = log_density_from_ground_state(traj.snapshots.back(), spec.eigenfunction);
    const auto states = solve_conjugate_backward(traj, t1, f1);
    const auto intervals = f_energy_rate_check(traj, states);
    REQUIRE(!intervals.empty());
    for (const auto& iv : intervals) {
        CHECK(std::abs(iv.mass0 - 1.0) <= 1e-6);
        CHECK(std::abs(iv.mass1 - 1.0) <= 1e-6);
        const double tol = 1e-3 * (1.0 + std::max(std::abs(iv.e0), std::abs(iv.e1)));
        CHECK(iv.defect >= -tol);
    }
    // λ0 chain: the energy at t1 equals λ0(g(t1)) and dominates the start.
    CHECK(intervals.back().e1 == doctest::Approx(spec.lambda0).epsilon(1e-6));
    CHECK(intervals.back().e1 >= intervals.front().e0 - 1e-6);
}

TEST_CASE("backward solve validates its inputs") {
    const auto tb = BaseSurface::torus(16);
    ConformalSurface s0(tb, Field(tb->node_count, 0.0), 0.0);
    StepControl ctrl;
    ctrl.t_end = 0.1;
    const FlowTrajectory traj = run_flow(s0, ctrl, 0.05);
    CHECK_THROWS_AS((void)solve_conjugate_backward(traj, 0.5, Field(tb->node_count, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)solve_conjugate_backward(traj, 0.1, Field(tb->node_count, 0.0)),
                    std::invalid_argument);  // e^{-f} does not integrate to 1

    const auto sb = BaseSurface::sphere(2);
    ConformalSurface sp(sb, Field(sb->node_count, 0.0), 0.0);
    FlowTrajectory sphere_traj = run_flow(sp, ctrl, 0.05);
    CHECK_THROWS_AS(
        (void)solve_conjugate_backward(sphere_traj, 0.1, Field(sb->node_count, 0.0)),
        std::invalid_argument);
}
