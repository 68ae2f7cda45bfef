#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rf2d/flow.hpp"
#include "rf2d/spectral.hpp"
#include "rf2d/surface.hpp"

namespace rf2d {

// The constant bundle for one metric:
//   a1 = C_{N,I} + vol^{-1/2} - min R⁻ / 4,  a2 = 1,
// and when λ0 > 0 additionally
//   δ0 = (λ0 + a1)^{-1},  b0 = ln(1 + a1/λ0) - 1.
struct LogSobolevConstants {
    double c_ni = 0.0;
    double vol = 0.0;
    double min_r_minus = 0.0;  // min(0, min R), nonpositive
    double lambda0 = 0.0;
    double a1 = 0.0;
    double a2 = 1.0;
    std::optional<double> delta0;
    std::optional<double> b0;
};

LogSobolevConstants assemble_constants(double c_ni, double vol, double min_r_minus, double lambda0);

// Computes λ0, volume and min R⁻ for s, with C_{N,I} either supplied
// (analytic values for the model bases) or taken from the sweep estimator.
LogSobolevConstants constants_for(const ConformalSurface& s,
                                  std::optional<double> c_ni_override = std::nullopt);

// Lower estimate of the Neumann isoperimetric constant
// sup min(vol Ω, vol Ωᶜ)^{1/2} / length(∂Ω) by sweeping level sets of the
// base coordinates, the first base eigenfunctions, and the λ0-eigenfunction.
double neumann_isoperimetric_estimate(const ConformalSurface& s);

// ∫(|∇u|² + ¼ R u²) dvol.
double schrodinger_energy(const ConformalSurface& s, const Field& u);

// ∫ u² ln u² dvol with the integrand extended by 0 at u = 0.
double entropy(const ConformalSurface& s, const Field& u);

// C_{N,I}·‖∇u‖₁ - ‖u - ū‖₂; nonnegative when the inequality holds.
double poincare_deficit(const ConformalSurface& s, const Field& u, double c_ni);

struct JensenReport {
    double jensen_deficit = 0.0;       // ln ∫u² - ∫|u| ln|u|, ≥ 0
    double l1_sobolev_deficit = 0.0;   // (C‖∇u‖₁ + vol^{-1/2})² - ∫u², ≥ 0
    double printed_form_deficit = 0.0; // ln(C‖∇u‖₁ + vol^{-1/2}) - ∫|u| ln|u|
};

// Requires ∫|u| dvol = 1. The first two deficits follow the proof chain;
// the printed inequality's deficit is reported alongside for comparison.
JensenReport jensen_entropy_check(const ConformalSurface& s, const Field& u, double c_ni);

// Right-hand sides of the flow log-Sobolev bounds, for a given total energy
// value E = ∫(|∇u|² + ¼Ru²)dvol of a unit-L²(g) function.
double theorem_a_rhs(const LogSobolevConstants& c, double energy, double sigma, double t);
double strong_a_rhs(const LogSobolevConstants& c, double energy, double t);
double theorem_b_rhs(const LogSobolevConstants& c, double energy, double sigma);
double strong_b_rhs(const LogSobolevConstants& c, double energy);

// entropy(u) - [σE - ln σ + 4(t+σ)A1 + A2]; requires ∫u² dvol = 1.
double logsobolev_deficit(const ConformalSurface& s, const LogSobolevConstants& c, const Field& u,
                          double sigma, double t);

// entropy(u) - [σE - ln σ + B0]; requires λ0 > 0 constants and t+σ ≥ δ0/4.
double logsobolev_deficit_B(const ConformalSurface& s, const LogSobolevConstants& c, const Field& u,
                            double sigma, double t);

// σ-grid {2^k : k = -8..4} used by the sweep suites.
std::vector<double> default_sigma_grid();

// Sobolev constant of Theorem-C type:
// 2^{2/(p-2)} exp(p/(2(p-2)) - (3/16)(min R⁻/4) + 2(T+1)A1 + A2/2).
double cbar(double p, double t_max, const LogSobolevConstants& c);
// Variant with + B0/2 in place of the T-dependent terms; needs λ0 > 0.
double cbar_b(double p, const LogSobolevConstants& c);

struct TestFunctionBattery {
    std::vector<std::pair<std::string, Field>> members;  // unit L²(g) norm

    void add(std::string label, Field u) { members.emplace_back(std::move(label), std::move(u)); }
};

// Constants, low base eigenfunctions, geodesic bumps over a scale grid,
// seeded random smooth fields, and (when supplied) the λ0-eigenfunction.
TestFunctionBattery build_battery(const ConformalSurface& s, std::uint64_t seed,
                                  const Field* lambda0_eigenfunction = nullptr);

struct AscentResult {
    Field maximizer;       // unit L²(g) norm
    double objective = 0.0;  // G(u*) = entropy - σE
    double deficit = 0.0;    // G(u*) - (-ln σ + 4(t+σ)A1 + A2)
    int iterations = 0;
};

class AscentDivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Projected-gradient ascent of G(u) = entropy(u) - σ∫(|∇u|²+¼Ru²) on the
// unit L²(g) sphere, best over the supplied starts.
AscentResult adversarial_logsobolev_max(const ConformalSurface& s, const LogSobolevConstants& c,
                                        double sigma, double t, const TestFunctionBattery& starts);

struct SobolevTrackRow {
    double t = 0.0;
    double measured_a = 0.0;
    double measured_b = 0.0;
    double worst_b0_form_defect = 0.0;  // max over members of y - A'x (λ0-absorbed)
};

struct SobolevTrack {
    std::vector<SobolevTrackRow> rows;
    bool unbounded_flag = false;  // monotone >10x growth of A or B
};

// Tracks the empirical Sobolev pair (A, B) with ‖u‖_p² ≤ A·E + B over the
// battery at each snapshot. The λ0-absorbed column uses A' = A + B/λ0(g0).
SobolevTrack sobolev_ratio_track(const FlowTrajectory& traj, double p, std::uint64_t seed,
                                 std::optional<double> lambda0_g0 = std::nullopt);

}  // namespace rf2d
