#include "rf2d/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rf2d::oracle {

namespace {
constexpr double kPi = std::numbers::pi;
}

double eval(const ModelSolution& m, Quantity q, double t) {
    if (m.family == Family::RoundSphere) {
        const double r0sq = m.size * m.size;
        const double rho_sq = r0sq - 2.0 * t;
        if (q == Quantity::ExtinctionTime) return r0sq / 2.0;
        if (!(t >= 0.0) || rho_sq <= 0.0)
            throw std::invalid_argument("oracle: t outside [0, T) for the round sphere");
        switch (q) {
            case Quantity::Volume: return 4.0 * kPi * rho_sq;
            case Quantity::ScalarCurvature: return 2.0 / rho_sq;
            case Quantity::Lambda0: return 1.0 / (2.0 * rho_sq);
            case Quantity::ConformalSquared: return rho_sq;
            default: break;
        }
    } else {
        switch (q) {
            case Quantity::Volume: return m.size * m.size;
            case Quantity::ScalarCurvature: return 0.0;
            case Quantity::Lambda0: return 0.0;
            case Quantity::ConformalSquared: return 1.0;
            case Quantity::ExtinctionTime:
                throw std::invalid_argument("oracle: flat torus does not go extinct");
        }
    }
    throw std::invalid_argument("oracle: unknown quantity");
}

double sphere_cap_sweep_cni() {
    // Ratio for a cap of polar angle θ: min(2π(1-cosθ), 2π(1+cosθ))^{1/2} / (2π sinθ).
    double best = 0.0;
    const int n = 20000;
    for (int k = 1; k < n; ++k) {
        const double theta = kPi * k / n;
        const double cap = 2.0 * kPi * (1.0 - std::cos(theta));
        const double side = std::min(cap, 4.0 * kPi - cap);
        const double len = 2.0 * kPi * std::sin(theta);
        best = std::max(best, std::sqrt(side) / len);
    }
    return best;
}

double torus_band_sweep_cni(double side) {
    // Band {0 < x < a}: area a·side, boundary 2·side.
    double best = 0.0;
    const int n = 20000;
    for (int k = 1; k < n; ++k) {
        const double a = side * k / n;
        const double cut = std::min(a * side, (side - a) * side);
        best = std::max(best, std::sqrt(cut) / (2.0 * side));
    }
    return best;
}

double analytic_cni(Family family) {
    // Frozen values of the sweeps above: 1/sqrt(2π) and sqrt(2)/4. The cut
    // families are the optimal ones (caps / straight bands), and the ratio is
    // scale invariant, so these serve any radius or side length.
    return family == Family::RoundSphere ? 1.0 / std::sqrt(2.0 * kPi) : std::sqrt(2.0) / 4.0;
}

double sphere_cap_area(double rho, double r) {
    return 2.0 * kPi * rho * rho * (1.0 - std::cos(r / rho));
}

}  // namespace rf2d::oracle
