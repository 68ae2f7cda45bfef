#include "rf2d/surface.hpp"

#include <cmath>
#include <stdexcept>

namespace rf2d {

namespace {

void check_field(const ConformalSurface& s, const Field& f, const char* who) {
    if (f.size() != s.node_count()) throw std::invalid_argument(std::string(who) + ": field/surface mismatch");
}

}  // namespace

ConformalSurface::ConformalSurface(std::shared_ptr<const BaseSurface> b, Field p, double t)
    : base(std::move(b)), phi(std::move(p)), time_stamp(t) {
    if (!base) throw std::invalid_argument("ConformalSurface: null base");
    if (phi.size() != base->node_count) throw std::invalid_argument("ConformalSurface: phi size mismatch");
    for (double v : phi)
        if (!std::isfinite(v)) throw std::invalid_argument("ConformalSurface: non-finite phi");
}

ConformalSurface make_surface(std::shared_ptr<const BaseSurface> base, Field phi, double t) {
    return ConformalSurface(std::move(base), std::move(phi), t);
}

Field conformal_mass(const ConformalSurface& s) {
    const auto& b = *s.base;
    Field m(b.node_count);
    par::map(b.node_count, [&](std::size_t i) { m[i] = std::exp(2.0 * s.phi[i]) * b.weights[i]; });
    return m;
}

Field curvature_times_mass(const ConformalSurface& s) {
    const auto& b = *s.base;
    Field q(b.node_count);
    par::spmv(b.stiffness, s.phi, q);  // (Sφ)_i = -w_i (Δ_b φ)_i
    par::map(b.node_count, [&](std::size_t i) {
        q[i] = b.base_scalar_curvature * b.weights[i] + 2.0 * q[i];
    });
    return q;
}

CurvatureSummary scalar_curvature(const ConformalSurface& s) {
    const auto& b = *s.base;
    CurvatureSummary out;
    out.r.resize(b.node_count);
    Field sphi(b.node_count);
    par::spmv(b.stiffness, s.phi, sphi);
    par::map(b.node_count, [&](std::size_t i) {
        const double lap = -sphi[i] / b.weights[i];  // Δ_b φ
        out.r[i] = std::exp(-2.0 * s.phi[i]) * (b.base_scalar_curvature - 2.0 * lap);
    });
    out.min_r = par::min_value(out.r);
    out.max_r = par::max_value(out.r);
    out.min_r_minus = std::min(0.0, out.min_r);
    return out;
}

double volume(const ConformalSurface& s) {
    const auto& b = *s.base;
    return par::sum_terms(b.node_count,
                          [&](std::size_t i) { return std::exp(2.0 * s.phi[i]) * b.weights[i]; });
}

double integrate(const ConformalSurface& s, const Field& f) {
    check_field(s, f, "integrate");
    const auto& b = *s.base;
    return par::sum_terms(b.node_count,
                          [&](std::size_t i) { return f[i] * std::exp(2.0 * s.phi[i]) * b.weights[i]; });
}

double dirichlet_energy(const ConformalSurface& s, const Field& u) {
    check_field(s, u, "dirichlet_energy");
    return par::quad_form(s.base->stiffness, u);
}

double curvature_quadratic(const ConformalSurface& s, const Field& u) {
    check_field(s, u, "curvature_quadratic");
    const Field q = curvature_times_mass(s);
    return par::sum_terms(u.size(), [&](std::size_t i) { return q[i] * u[i] * u[i]; });
}

Field base_gradient_norm(const ConformalSurface& s, const Field& u) {
    check_field(s, u, "base_gradient_norm");
    const auto& b = *s.base;
    Field g(b.node_count, 0.0);
    if (b.kind == SurfaceKind::Torus) {
        const unsigned n = b.resolution;
        const double inv2h = 1.0 / (2.0 * b.mesh_spacing);
        par::map(b.node_count, [&](std::size_t id) {
            const unsigned i = static_cast<unsigned>(id % n), j = static_cast<unsigned>(id / n);
            const double ux = (u[j * n + (i + 1) % n] - u[j * n + (i + n - 1) % n]) * inv2h;
            const double uy = (u[((j + 1) % n) * n + i] - u[((j + n - 1) % n) * n + i]) * inv2h;
            g[id] = std::hypot(ux, uy);
        });
    } else {
        // Face gradients of the affine interpolant, then area-weighted node averages.
        Field acc(b.node_count, 0.0), aresum(b.node_count, 0.0);
        for (std::size_t f = 0; f < b.faces.size(); ++f) {
            const auto& tri = b.faces[f];
            const auto &pa = b.pos[tri[0]], &pb = b.pos[tri[1]], &pc = b.pos[tri[2]];
            const double e1[3] = {pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]};
            const double e2[3] = {pc[0] - pa[0], pc[1] - pa[1], pc[2] - pa[2]};
            const double d1 = u[tri[1]] - u[tri[0]], d2 = u[tri[2]] - u[tri[0]];
            // Solve the 2x2 Gram system for the tangential gradient.
            const double g11 = e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2];
            const double g12 = e1[0] * e2[0] + e1[1] * e2[1] + e1[2] * e2[2];
            const double g22 = e2[0] * e2[0] + e2[1] * e2[1] + e2[2] * e2[2];
            const double det = g11 * g22 - g12 * g12;
            const double a1 = (g22 * d1 - g12 * d2) / det;
            const double a2 = (g11 * d2 - g12 * d1) / det;
            const double gn = std::sqrt(std::max(0.0, a1 * d1 + a2 * d2));
            const double area = b.face_flat_area[f];
            for (int k = 0; k < 3; ++k) {
                acc[tri[k]] += gn * area;
                aresum[tri[k]] += area;
            }
        }
        par::map(b.node_count, [&](std::size_t i) { g[i] = acc[i] / aresum[i]; });
    }
    return g;
}

double grad_norm_l1(const ConformalSurface& s, const Field& u) {
    const Field g = base_gradient_norm(s, u);
    const auto& b = *s.base;
    // |∇u|_g dvol_g = e^{-φ}|∇u|_b · e^{2φ} dvol_b.
    return par::sum_terms(b.node_count,
                          [&](std::size_t i) { return std::exp(s.phi[i]) * g[i] * b.weights[i]; });
}

std::vector<std::array<double, 3>> hessian(const ConformalSurface& s, const Field& f) {
    check_field(s, f, "hessian");
    const auto& b = *s.base;
    if (b.kind != SurfaceKind::Torus)
        throw std::invalid_argument("hessian: only supported on the torus base");
    const unsigned n = b.resolution;
    const double h = b.mesh_spacing;
    std::vector<std::array<double, 3>> out(b.node_count);
    par::map(b.node_count, [&](std::size_t id) {
        const unsigned i = static_cast<unsigned>(id % n), j = static_cast<unsigned>(id / n);
        auto at = [&](int di, int dj) {
            return static_cast<std::size_t>((j + dj + n) % n) * n + (i + di + n) % n;
        };
        auto d1 = [&](const Field& v, bool ydir) {
            return (v[at(ydir ? 0 : 1, ydir ? 1 : 0)] - v[at(ydir ? 0 : -1, ydir ? -1 : 0)]) / (2 * h);
        };
        const double fx = d1(f, false), fy = d1(f, true);
        const double px = d1(s.phi, false), py = d1(s.phi, true);
        const double fxx = (f[at(1, 0)] - 2 * f[id] + f[at(-1, 0)]) / (h * h);
        const double fyy = (f[at(0, 1)] - 2 * f[id] + f[at(0, -1)]) / (h * h);
        const double fxy = (f[at(1, 1)] - f[at(1, -1)] - f[at(-1, 1)] + f[at(-1, -1)]) / (4 * h * h);
        // Conformal Christoffels: Γ^k_ij = δ^k_i ∂_j φ + δ^k_j ∂_i φ - δ_ij ∂^k φ.
        out[id][0] = fxx - px * fx + py * fy;
        out[id][1] = fxy - py * fx - px * fy;
        out[id][2] = fyy + px * fx - py * fy;
    });
    return out;
}

double mass_norm_sq(const ConformalSurface& s, const Field& u) {
    check_field(s, u, "mass_norm_sq");
    const auto& b = *s.base;
    return par::sum_terms(b.node_count, [&](std::size_t i) {
        return u[i] * u[i] * std::exp(2.0 * s.phi[i]) * b.weights[i];
    });
}

double l1_norm(const ConformalSurface& s, const Field& u) {
    check_field(s, u, "l1_norm");
    const auto& b = *s.base;
    return par::sum_terms(b.node_count, [&](std::size_t i) {
        return std::abs(u[i]) * std::exp(2.0 * s.phi[i]) * b.weights[i];
    });
}

double mean(const ConformalSurface& s, const Field& u) { return integrate(s, u) / volume(s); }

Field normalized_l2(const ConformalSurface& s, const Field& u) {
    const double nrm = std::sqrt(mass_norm_sq(s, u));
    if (!(nrm > 0.0)) throw std::invalid_argument("normalized_l2: zero field");
    Field v(u.size());
    par::map(u.size(), [&](std::size_t i) { v[i] = u[i] / nrm; });
    return v;
}

}  // namespace rf2d
