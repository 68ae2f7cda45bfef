#pragma once

#include <stdexcept>

#include "rf2d/surface.hpp"

namespace rf2d {

struct SpectralResult {
    double lambda0 = 0.0;
    Field eigenfunction;  // unit L²(g) norm, sign-fixed to nonnegative mean
    double residual = 0.0;
    int iterations = 0;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(std::string what, SpectralResult best)
        : std::runtime_error(std::move(what)), best_iterate(std::move(best)) {}
    SpectralResult best_iterate;
};

// Rayleigh quotient of -Δ + R/4: [∫|∇u|² + ¼∫R u² dvol] / ∫u² dvol.
// The potential term is evaluated as ¼ Σ (R_b w - 2(Δ_bφ)w) u², so no
// conformal factor is ever divided out.
double rayleigh_quotient(const ConformalSurface& s, const Field& u);

// Smallest eigenvalue of -Δ + R/4 against the conformal mass weights.
// Preconditioned conjugate-direction minimization of the Rayleigh quotient
// (single-vector LOBPCG) from an all-ones start; deterministic.
SpectralResult lambda0(const ConformalSurface& s, double tol = 1e-9, int max_iterations = 5000);

// f = -2 ln u1 with the ground state clamped below at 1e-12·max|u1|.
Field log_density_from_ground_state(const ConformalSurface& s, const Field& u1);

}  // namespace rf2d
