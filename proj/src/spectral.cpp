#include "rf2d/spectral.hpp"

#include <array>
#include <cmath>

namespace rf2d {

namespace {

// Hot little dense helpers for the 3-dimensional Rayleigh-Ritz step.

// Symmetric 3x3 Jacobi eigensolver; returns eigenvalues ascending with
// matching columns in v.
void jacobi3(std::array<std::array<double, 3>, 3> a, std::array<double, 3>& w,
             std::array<std::array<double, 3>, 3>& v) {
    v = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-300) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    w = {a[0][0], a[1][1], a[2][2]};
    // Sort ascending.
    for (int i = 0; i < 2; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (w[j] < w[i]) {
                std::swap(w[i], w[j]);
                for (int k = 0; k < 3; ++k) std::swap(v[k][i], v[k][j]);
            }
}

struct Operator {
    const CsrMatrix* stiffness;
    const Field* quarter_q;  // ¼ (R_b w + 2 Sφ)
    const Field* mass;       // e^{2φ} w

    void apply(const Field& u, Field& out) const {
        par::spmv(*stiffness, u, out);
        par::map(u.size(), [&](std::size_t i) { out[i] += (*quarter_q)[i] * u[i]; });
    }
    double m_dot(const Field& a, const Field& b) const {
        return par::sum_terms(a.size(), [&](std::size_t i) { return a[i] * (*mass)[i] * b[i]; });
    }
};

// Inner CG on (S + diag(w_b)) z = r. Serves as the base-Laplacian
// preconditioner; loose tolerance, fixed caps, all deterministic.
void precondition(const CsrMatrix& s, const Field& wb, const Field& r, Field& z) {
    const std::size_t n = r.size();
    z.assign(n, 0.0);
    Field p = r, res = r, sp(n);
    double rr = par::dot(res, res);
    const double rr0 = rr;
    if (!(rr0 > 0.0)) return;
    for (int it = 0; it < 100 && rr > 1e-4 * rr0; ++it) {
        par::spmv(s, p, sp);
        par::map(n, [&](std::size_t i) { sp[i] += wb[i] * p[i]; });
        const double alpha = rr / par::dot(p, sp);
        par::map(n, [&](std::size_t i) {
            z[i] += alpha * p[i];
            res[i] -= alpha * sp[i];
        });
        const double rr_new = par::dot(res, res);
        const double beta = rr_new / rr;
        rr = rr_new;
        par::map(n, [&](std::size_t i) { p[i] = res[i] + beta * p[i]; });
    }
}

}  // namespace

double rayleigh_quotient(const ConformalSurface& s, const Field& u) {
    const double mass = mass_norm_sq(s, u);
    if (!(mass > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero field");
    return (dirichlet_energy(s, u) + 0.25 * curvature_quadratic(s, u)) / mass;
}

SpectralResult lambda0(const ConformalSurface& s, double tol, int max_iterations) {
    if (!(tol > 0.0)) throw std::invalid_argument("lambda0: tol must be positive");
    const std::size_t n = s.node_count();
    const Field mass = conformal_mass(s);
    Field quarter_q = curvature_times_mass(s);
    par::map(n, [&](std::size_t i) { quarter_q[i] *= 0.25; });
    const Operator op{&s.base->stiffness, &quarter_q, &mass};

    Field x(n, 1.0);
    {
        const double nrm = std::sqrt(op.m_dot(x, x));
        par::map(n, [&](std::size_t i) { x[i] /= nrm; });
    }
    Field ax(n), r(n), z(n), p, ap, az(n);
    op.apply(x, ax);
    double rho = par::dot(x, ax);

    auto residual_norm = [&](const Field& res) {
        return std::sqrt(par::sum_terms(n, [&](std::size_t i) { return res[i] * res[i] / mass[i]; })) /
               (1.0 + std::abs(rho));
    };

    SpectralResult out;
    int it = 0;
    double resid = 0.0;
    for (;; ++it) {
        par::map(n, [&](std::size_t i) { r[i] = ax[i] - rho * mass[i] * x[i]; });
        resid = residual_norm(r);
        if (resid <= tol || it >= max_iterations) break;

        precondition(s.base->stiffness, s.base->weights, r, z);

        // M-orthonormal basis {x, z, p}, dropping near-dependent directions.
        std::vector<Field*> basis = {&x, &z};
        if (!p.empty()) basis.push_back(&p);
        std::vector<Field> q;
        q.reserve(3);
        for (Field* b : basis) {
            Field v = *b;
            for (const Field& e : q) {
                const double c = op.m_dot(e, v);
                par::map(n, [&](std::size_t i) { v[i] -= c * e[i]; });
            }
            const double nr = std::sqrt(std::max(0.0, op.m_dot(v, v)));
            if (nr > 1e-10) {
                par::map(n, [&](std::size_t i) { v[i] /= nr; });
                q.push_back(std::move(v));
            }
        }
        const int m = static_cast<int>(q.size());
        if (m == 1) break;  // stagnated in a single direction: x is converged

        // Rayleigh-Ritz on span(q). B = I by construction.
        std::array<std::array<double, 3>, 3> amat{};
        std::vector<Field> aq(m, Field(n));
        for (int i = 0; i < m; ++i) op.apply(q[i], aq[i]);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) amat[i][j] = par::dot(q[i], aq[j]);
        for (int i = m; i < 3; ++i) amat[i][i] = 1e300;  // pad unused block

        std::array<double, 3> w;
        std::array<std::array<double, 3>, 3> vec;
        jacobi3(amat, w, vec);
        rho = w[0];

        Field xn(n, 0.0), axn(n, 0.0), pn(n, 0.0);
        for (int i = 0; i < m; ++i) {
            const double c = vec[i][0];
            par::map(n, [&](std::size_t k) {
                xn[k] += c * q[i][k];
                axn[k] += c * aq[i][k];
            });
            if (i >= 1) par::map(n, [&](std::size_t k) { pn[k] += c * q[i][k]; });
        }
        x = std::move(xn);
        ax = std::move(axn);
        p = std::move(pn);
    }

    // Sign fix: ground states are positive; make the mean nonnegative.
    const double xmean = par::sum_terms(n, [&](std::size_t i) { return x[i] * mass[i]; });
    if (xmean < 0.0) par::map(n, [&](std::size_t i) { x[i] = -x[i]; });
    const double nrm = std::sqrt(op.m_dot(x, x));
    par::map(n, [&](std::size_t i) { x[i] /= nrm; });

    out.lambda0 = rho;
    out.eigenfunction = std::move(x);
    out.residual = resid;
    out.iterations = it;
    if (resid > tol)
        throw ConvergenceError("lambda0: no convergence after iteration cap", std::move(out));
    return out;
}

Field log_density_from_ground_state(const ConformalSurface& s, const Field& u1) {
    if (u1.size() != s.node_count()) throw std::invalid_argument("log_density: size mismatch");
    double amax = 0.0;
    for (double v : u1) amax = std::max(amax, std::abs(v));
    if (!(amax > 0.0)) throw std::invalid_argument("log_density: zero ground state");
    const double floor = 1e-12 * amax;
    Field f(u1.size());
    par::map(u1.size(), [&](std::size_t i) { f[i] = -2.0 * std::log(std::max(u1[i], floor)); });
    return f;
}

}  // namespace rf2d
