#pragma once

#include <array>
#include <memory>
#include <vector>

#include "rf2d/base_surface.hpp"

namespace rf2d {

// Per-node scalar values on a surface.
using Field = std::vector<double>;

// Metric g = e^{2φ} g_base at flow time `time_stamp`. Immutable after
// construction; all operations below are pure.
struct ConformalSurface {
    std::shared_ptr<const BaseSurface> base;
    Field phi;
    double time_stamp = 0.0;

    ConformalSurface() = default;
    ConformalSurface(std::shared_ptr<const BaseSurface> b, Field p, double t = 0.0);

    std::size_t node_count() const { return base->node_count; }
};

ConformalSurface make_surface(std::shared_ptr<const BaseSurface> base, Field phi, double t = 0.0);

struct CurvatureSummary {
    Field r;             // scalar curvature per node
    double min_r = 0.0;
    double max_r = 0.0;
    double min_r_minus = 0.0;  // min(0, min_r)
};

// Conformal volume element per node: e^{2φ_i} w_i.
Field conformal_mass(const ConformalSurface& s);

// R = e^{-2φ}(R_b - 2 Δ_b φ).
CurvatureSummary scalar_curvature(const ConformalSurface& s);

// Per-node values of (R_b - 2 Δ_b φ)·w, i.e. R dvol without the conformal
// factors: Σ q_i u_i² = ∫ R u² dvol exactly.
Field curvature_times_mass(const ConformalSurface& s);

double volume(const ConformalSurface& s);
double integrate(const ConformalSurface& s, const Field& f);

// ∫|∇u|²_g dvol_g; conformally invariant in 2D, evaluated as uᵀSu on the base.
double dirichlet_energy(const ConformalSurface& s, const Field& u);

// ∫|∇u|_g dvol_g = Σ e^{φ} |∇u|_b w_b.
double grad_norm_l1(const ConformalSurface& s, const Field& u);

// ∫ R u² dvol, via curvature_times_mass (no division by e^{2φ}).
double curvature_quadratic(const ConformalSurface& s, const Field& u);

// Pointwise base gradient magnitude |∇u|_b. Torus: centered differences.
// Sphere: per-triangle affine gradients, area-averaged to nodes.
Field base_gradient_norm(const ConformalSurface& s, const Field& u);

// Covariant Hessian of f in the conformal metric, torus base only.
// Components stored as (xx, xy, yy).
std::vector<std::array<double, 3>> hessian(const ConformalSurface& s, const Field& f);

// dvol-weighted helpers.
double mass_norm_sq(const ConformalSurface& s, const Field& u);  // ∫u² dvol
double l1_norm(const ConformalSurface& s, const Field& u);       // ∫|u| dvol
double mean(const ConformalSurface& s, const Field& u);          // ∫u dvol / vol
Field normalized_l2(const ConformalSurface& s, const Field& u);  // ∫u² dvol = 1

}  // namespace rf2d
