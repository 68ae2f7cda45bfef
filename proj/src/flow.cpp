#include "rf2d/flow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "rf2d/snapshot_io.hpp"

namespace rf2d {

namespace {

// dφ/dt = e^{-2φ}(Δ_bφ - R_b/2); (Sφ)_i = -w_i (Δ_bφ)_i.
void flow_rhs(const BaseSurface& b, const Field& phi, Field& sphi, Field& out) {
    par::spmv(b.stiffness, phi, sphi);
    par::map(b.node_count, [&](std::size_t i) {
        out[i] = std::exp(-2.0 * phi[i]) * (-sphi[i] / b.weights[i] - 0.5 * b.base_scalar_curvature);
    });
}

double cfl_dt(const BaseSurface& b, const Field& phi, double safety) {
    const double min_conf = std::exp(2.0 * par::min_value(phi));
    return safety * b.mesh_spacing * b.mesh_spacing * min_conf;
}

Field rk4_phi_step(const BaseSurface& b, const Field& phi, double dt) {
    const std::size_t n = b.node_count;
    Field k1(n), k2(n), k3(n), k4(n), tmp(n), sphi(n);
    flow_rhs(b, phi, sphi, k1);
    par::map(n, [&](std::size_t i) { tmp[i] = phi[i] + 0.5 * dt * k1[i]; });
    flow_rhs(b, tmp, sphi, k2);
    par::map(n, [&](std::size_t i) { tmp[i] = phi[i] + 0.5 * dt * k2[i]; });
    flow_rhs(b, tmp, sphi, k3);
    par::map(n, [&](std::size_t i) { tmp[i] = phi[i] + dt * k3[i]; });
    flow_rhs(b, tmp, sphi, k4);
    Field out(n);
    par::map(n, [&](std::size_t i) {
        out[i] = phi[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    });
    return out;
}

}  // namespace

Field FlowTrajectory::phi_at(double t) const {
    if (snapshots.empty()) throw std::logic_error("phi_at: empty trajectory");
    if (t <= snapshots.front().time_stamp) return snapshots.front().phi;
    if (t >= snapshots.back().time_stamp) return snapshots.back().phi;
    std::size_t hi = 1;
    while (snapshots[hi].time_stamp < t) ++hi;
    const auto& a = snapshots[hi - 1];
    const auto& b = snapshots[hi];
    const double s = (t - a.time_stamp) / (b.time_stamp - a.time_stamp);
    Field phi(a.phi.size());
    par::map(phi.size(), [&](std::size_t i) { phi[i] = (1.0 - s) * a.phi[i] + s * b.phi[i]; });
    return phi;
}

ConformalSurface FlowTrajectory::surface_at(double t) const {
    return ConformalSurface(snapshots.front().base, phi_at(t), t);
}

ConformalSurface flow_step(const ConformalSurface& s, const StepControl& ctrl) {
    const auto& b = *s.base;
    const double min_conf = std::exp(2.0 * par::min_value(s.phi));
    if (min_conf < kExtinctionConformalSq)
        throw std::invalid_argument("flow_step: extinction already reached");
    double dt = std::min(ctrl.dt_max, cfl_dt(b, s.phi, ctrl.safety_factor));
    if (ctrl.t_end > s.time_stamp) dt = std::min(dt, ctrl.t_end - s.time_stamp);
    if (dt < ctrl.dt_min) throw StepUnderflowError("flow_step: dt underflow near extinction");
    return ConformalSurface(s.base, rk4_phi_step(b, s.phi, dt), s.time_stamp + dt);
}

FlowTrajectory run_flow(const ConformalSurface& s0, const StepControl& ctrl, double snapshot_every) {
    if (!(snapshot_every > 0.0)) throw std::invalid_argument("run_flow: snapshot_every must be > 0");
    FlowTrajectory traj;
    const auto& b = *s0.base;
    const double vol0 = volume(s0);
    Field phi = s0.phi;
    double t = s0.time_stamp;
    traj.snapshots.push_back(s0);
    double next_snapshot = t + snapshot_every;

    auto min_conf = [&]() { return std::exp(2.0 * par::min_value(phi)); };

    while (true) {
        if (t >= ctrl.t_end - 1e-15) {
            traj.terminated_reason = FlowTermination::ReachedTEnd;
            break;
        }
        double dt = std::min(ctrl.dt_max, cfl_dt(b, phi, ctrl.safety_factor));
        if (dt < ctrl.dt_min) {
            traj.terminated_reason = FlowTermination::StepUnderflow;
            break;
        }
        // Land exactly on snapshot times and on t_end.
        dt = std::min(dt, std::min(next_snapshot, ctrl.t_end) - t + 0.0);
        dt = std::max(dt, 0.0);
        phi = rk4_phi_step(b, phi, dt);
        t += dt;

        const ConformalSurface cur(s0.base, phi, t);
        const CurvatureSummary curv = scalar_curvature(cur);
        traj.step_stats.push_back({t, dt, curv.min_r, curv.max_r});

        const double mc = min_conf();
        if (std::isnan(traj.threshold_time_1e2) && mc < 1e-2) traj.threshold_time_1e2 = t;
        if (std::isnan(traj.threshold_time_1e3) && mc < 1e-3) traj.threshold_time_1e3 = t;

        if (t >= next_snapshot - 1e-15) {
            traj.snapshots.push_back(cur);
            next_snapshot += snapshot_every;
        }

        if (mc < kExtinctionConformalSq || volume(cur) < kExtinctionVolumeFraction * vol0) {
            traj.terminated_reason = FlowTermination::Extinction;
            traj.extinction_time = t;
            break;
        }
    }

    // Always store the terminal state.
    if (traj.snapshots.back().time_stamp < t - 1e-15)
        traj.snapshots.push_back(ConformalSurface(s0.base, phi, t));
    traj.final_time = t;
    return traj;
}

void write_trajectory(const std::filesystem::path& dir, const FlowTrajectory& traj) {
    std::filesystem::create_directories(dir);
    std::ofstream manifest(dir / "manifest.csv", std::ios::trunc);
    if (!manifest) throw std::runtime_error("write_trajectory: cannot open manifest");
    manifest << "time,volume,min_R,max_R\n";
    char line[160];
    for (const auto& s : traj.snapshots) {
        write_snapshot(dir / snapshot_filename(s.time_stamp), s);
        const CurvatureSummary c = scalar_curvature(s);
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", s.time_stamp, volume(s),
                      c.min_r, c.max_r);
        manifest << line;
    }
}

FlowTrajectory read_trajectory(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".rf2d") files.push_back(e.path());
    if (files.empty()) throw std::runtime_error("read_trajectory: no snapshots in " + dir.string());
    std::sort(files.begin(), files.end());
    FlowTrajectory traj;
    std::shared_ptr<const BaseSurface> base;
    for (const auto& p : files) {
        ConformalSurface s = read_snapshot(p, base);
        base = s.base;
        traj.snapshots.push_back(std::move(s));
    }
    traj.final_time = traj.snapshots.back().time_stamp;
    return traj;
}

std::vector<ConjugateHeatState> solve_conjugate_backward(const FlowTrajectory& traj, double t1,
                                                         const Field& f_at_t1,
                                                         double safety_factor) {
    const auto& base = traj.snapshots.front().base;
    const auto& b = *base;
    if (b.kind != SurfaceKind::Torus)
        throw std::invalid_argument("solve_conjugate_backward: torus base only");
    if (t1 < traj.start_time() - 1e-12 || t1 > traj.end_time() + 1e-12)
        throw std::invalid_argument("solve_conjugate_backward: t1 outside trajectory range");
    const std::size_t n = b.node_count;
    if (f_at_t1.size() != n) throw std::invalid_argument("solve_conjugate_backward: f size mismatch");

    Field v(n);
    par::map(n, [&](std::size_t i) { v[i] = std::exp(-f_at_t1[i]); });
    {
        const ConformalSurface s1 = traj.surface_at(t1);
        const double mass = integrate(s1, v);
        if (std::abs(mass - 1.0) > 1e-6)
            throw std::invalid_argument("solve_conjugate_backward: e^{-f(t1)} must integrate to 1");
    }

    // Snapshot times at or below t1, descending target list for the backward sweep.
    std::vector<double> targets;
    for (const auto& s : traj.snapshots)
        if (s.time_stamp < t1 - 1e-12) targets.push_back(s.time_stamp);
    std::sort(targets.rbegin(), targets.rend());

    // φ and Sφ are linear between snapshots, so interpolate both directly.
    const auto phi_of = [&](double t) { return traj.phi_at(t); };

    Field sphi(n), phi_t(n), rhs_out(n);
    auto rhs = [&](const Field& vv, double t, Field& out) {
        phi_t = phi_of(t);
        par::spmv(b.stiffness, phi_t, sphi);
        Field sv(n);
        par::spmv(b.stiffness, vv, sv);
        par::map(n, [&](std::size_t i) {
            const double q = b.base_scalar_curvature * b.weights[i] + 2.0 * sphi[i];
            out[i] = -std::exp(-2.0 * phi_t[i]) * (sv[i] + q * vv[i]) / b.weights[i];
        });
    };

    std::vector<ConjugateHeatState> states;
    auto push_state = [&](double t) {
        ConjugateHeatState st;
        st.v = v;
        st.f.resize(n);
        par::map(n, [&](std::size_t i) { st.f[i] = -std::log(v[i]); });
        st.time = t;
        states.push_back(std::move(st));
    };
    push_state(t1);

    double t = t1;
    Field k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (double target : targets) {
        while (t > target + 1e-15) {
            const double min_conf = std::exp(2.0 * par::min_value(phi_of(t)));
            double dt = std::min(safety_factor * b.mesh_spacing * b.mesh_spacing * min_conf,
                                 t - target);
            for (int attempt = 0;; ++attempt) {
                // One RK4 step backward in flow time (forward in τ).
                rhs(v, t, k1);
                par::map(n, [&](std::size_t i) { tmp[i] = v[i] + 0.5 * dt * k1[i]; });
                rhs(tmp, t - 0.5 * dt, k2);
                par::map(n, [&](std::size_t i) { tmp[i] = v[i] + 0.5 * dt * k2[i]; });
                rhs(tmp, t - 0.5 * dt, k3);
                par::map(n, [&](std::size_t i) { tmp[i] = v[i] + dt * k3[i]; });
                rhs(tmp, t - dt, k4);
                par::map(n, [&](std::size_t i) {
                    tmp[i] = v[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                });
                if (par::min_value(tmp) > 0.0) break;
                if (attempt >= 40)
                    throw PositivityLossError("solve_conjugate_backward: v lost positivity");
                dt *= 0.5;  // retry with a smaller step
            }
            v = tmp;
            t -= dt;
        }
        t = target;
        push_state(t);
    }

    std::reverse(states.begin(), states.end());
    return states;
}

std::vector<FEnergyInterval> f_energy_rate_check(const FlowTrajectory& traj,
                                                 const std::vector<ConjugateHeatState>& states) {
    if (states.size() < 2) return {};
    const auto& base = traj.snapshots.front().base;
    if (base->kind != SurfaceKind::Torus)
        throw std::invalid_argument("f_energy_rate_check: torus base only");
    const std::size_t n = base->node_count;

    struct PointData {
        double energy, lower_bound, mass;
    };
    auto eval = [&](const ConjugateHeatState& st) {
        const ConformalSurface s = traj.surface_at(st.time);
        Field u(n);
        par::map(n, [&](std::size_t i) { u[i] = std::sqrt(st.v[i]); });
        const double energy = dirichlet_energy(s, u) + 0.25 * curvature_quadratic(s, u);
        const double mass = integrate(s, st.v);
        // ½ ∫|Ric + ∇²f|² e^{-f} dvol with Ric = (R/2) e^{2φ} δ in base coords.
        const auto hess = hessian(s, st.f);
        const CurvatureSummary curv = scalar_curvature(s);
        const double lb = 0.5 * par::sum_terms(n, [&](std::size_t i) {
            const double conf = std::exp(2.0 * s.phi[i]);
            const double ric = 0.5 * curv.r[i] * conf;
            const double a11 = ric + hess[i][0], a12 = hess[i][1], a22 = ric + hess[i][2];
            const double norm_sq = (a11 * a11 + 2.0 * a12 * a12 + a22 * a22) / (conf * conf);
            return norm_sq * st.v[i] * conf * base->weights[i];
        });
        return PointData{energy, lb, mass};
    };

    std::vector<FEnergyInterval> out;
    PointData prev = eval(states.front());
    for (std::size_t k = 1; k < states.size(); ++k) {
        const PointData cur = eval(states[k]);
        FEnergyInterval row;
        row.t0 = states[k - 1].time;
        row.t1 = states[k].time;
        row.e0 = prev.energy;
        row.e1 = cur.energy;
        row.de_dt = (cur.energy - prev.energy) / (row.t1 - row.t0);
        row.lower_bound = 0.5 * (prev.lower_bound + cur.lower_bound);
        row.defect = row.de_dt - row.lower_bound;
        row.mass0 = prev.mass;
        row.mass1 = cur.mass;
        out.push_back(row);
        prev = cur;
    }
    return out;
}

}  // namespace rf2d
