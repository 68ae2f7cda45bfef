#pragma once

#include <filesystem>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rf2d/surface.hpp"

namespace rf2d {

struct StepControl {
    double safety_factor = 0.2;  // fraction of the diffusive CFL limit
    double dt_max = 1e-2;
    double dt_min = 1e-12;
    double t_end = 1.0;
};

enum class FlowTermination { ReachedTEnd, Extinction, StepUnderflow };

// Extinction is declared when the conformal factor or the volume collapses.
inline constexpr double kExtinctionConformalSq = 1e-3;
inline constexpr double kExtinctionVolumeFraction = 1e-3;

struct StepStat {
    double t = 0.0;  // time after the step
    double dt = 0.0;
    double min_r = 0.0;
    double max_r = 0.0;
};

class StepUnderflowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PositivityLossError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FlowTrajectory {
    std::vector<ConformalSurface> snapshots;  // strictly increasing time stamps
    std::vector<StepStat> step_stats;
    FlowTermination terminated_reason = FlowTermination::ReachedTEnd;
    double final_time = 0.0;
    double extinction_time = std::numeric_limits<double>::quiet_NaN();
    // First times min e^{2φ} drops below 1e-2 / 1e-3 (NaN if never); the pair
    // supports Richardson extrapolation of the extinction time.
    double threshold_time_1e2 = std::numeric_limits<double>::quiet_NaN();
    double threshold_time_1e3 = std::numeric_limits<double>::quiet_NaN();

    double start_time() const { return snapshots.front().time_stamp; }
    double end_time() const { return snapshots.back().time_stamp; }
    // Linear interpolation of φ between stored snapshots (clamped to range).
    Field phi_at(double t) const;
    ConformalSurface surface_at(double t) const;
};

// One explicit RK4 step of ∂φ/∂t = e^{-2φ}(Δ_bφ - R_b/2) with
// dt = min(dt_max, remaining time, safety·h²·min e^{2φ}).
ConformalSurface flow_step(const ConformalSurface& s, const StepControl& ctrl);

FlowTrajectory run_flow(const ConformalSurface& s0, const StepControl& ctrl, double snapshot_every);

// Trajectory directory: one RF2D snapshot per stored time plus manifest.csv
// with one "time,volume,min_R,max_R" line per snapshot.
void write_trajectory(const std::filesystem::path& dir, const FlowTrajectory& traj);
FlowTrajectory read_trajectory(const std::filesystem::path& dir);

struct ConjugateHeatState {
    Field v;  // positive density, ∫v dvol = 1 up to integrator error
    Field f;  // -ln v
    double time = 0.0;
};

// Integrates the conjugate heat equation ∂v/∂τ = Δv - Rv (τ = t1 - t) from
// f(t1) backward to the start of the trajectory, with the metric linearly
// interpolated between snapshots. Returns states at snapshot times ≤ t1,
// ascending in flow time. Torus base only.
std::vector<ConjugateHeatState> solve_conjugate_backward(const FlowTrajectory& traj, double t1,
                                                         const Field& f_at_t1,
                                                         double safety_factor = 0.2);

struct FEnergyInterval {
    double t0 = 0.0, t1 = 0.0;
    double e0 = 0.0, e1 = 0.0;      // ∫(|∇u|² + ¼Ru²)dvol with u = e^{-f/2}
    double de_dt = 0.0;             // (e1 - e0)/(t1 - t0)
    double lower_bound = 0.0;       // trapezoid of ½∫|Ric+∇²f|² e^{-f} dvol
    double defect = 0.0;            // de_dt - lower_bound
    double mass0 = 0.0, mass1 = 0.0;
};

std::vector<FEnergyInterval> f_energy_rate_check(const FlowTrajectory& traj,
                                                 const std::vector<ConjugateHeatState>& states);

}  // namespace rf2d
