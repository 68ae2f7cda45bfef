#include "rf2d/noncollapse.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace rf2d {

Field geodesic_distances(const ConformalSurface& s, std::size_t source) {
    const auto& b = *s.base;
    if (source >= b.node_count) throw std::invalid_argument("geodesic_distances: bad source");
    Field dist(b.node_count, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, unsigned>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, static_cast<unsigned>(source));
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (std::size_t k = b.adj_ptr[u]; k < b.adj_ptr[u + 1]; ++k) {
            const unsigned v = b.adj_node[k];
            const double nd = d + b.adj_len[k] * std::exp(0.5 * (s.phi[u] + s.phi[v]));
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    return dist;
}

double ball_volume(const ConformalSurface& s, const Field& distances, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_volume: r must be > 0");
    const auto& b = *s.base;
    return par::sum_terms(b.node_count, [&](std::size_t i) {
        return distances[i] < r ? std::exp(2.0 * s.phi[i]) * b.weights[i] : 0.0;
    });
}

double ball_volume(const ConformalSurface& s, std::size_t center, double r) {
    return ball_volume(s, geodesic_distances(s, center), r);
}

std::vector<std::size_t> farthest_point_sample(const ConformalSurface& s, std::size_t count) {
    const std::size_t n = s.node_count();
    count = std::min(count, n);
    std::vector<std::size_t> centers;
    Field min_dist(n, std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    for (std::size_t k = 0; k < count; ++k) {
        centers.push_back(next);
        const Field d = geodesic_distances(s, next);
        double best = -1.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            min_dist[i] = std::min(min_dist[i], d[i]);
            if (min_dist[i] > best) {
                best = min_dist[i];
                arg = i;
            }
        }
        next = arg;
    }
    return centers;
}

double approx_diameter(const ConformalSurface& s) {
    const Field d0 = geodesic_distances(s, 0);
    std::size_t far = 0;
    for (std::size_t i = 0; i < d0.size(); ++i)
        if (d0[i] > d0[far]) far = i;
    const Field d1 = geodesic_distances(s, far);
    return par::max_value(d1);
}

std::vector<double> default_radius_grid(const ConformalSurface& s, std::size_t count) {
    const double mean_phi = par::sum(s.phi) / static_cast<double>(s.node_count());
    const double h_eff = s.base->mesh_spacing * std::exp(mean_phi);
    const double diam = approx_diameter(s);
    double r_min = 12.0 * h_eff;
    const double r_max = diam / 2.0;
    if (r_min >= r_max) r_min = r_max / 4.0;
    std::vector<double> radii(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double frac = count > 1 ? static_cast<double>(k) / (count - 1) : 0.0;
        radii[k] = r_min * std::pow(r_max / r_min, frac);
    }
    return radii;
}

NoncollapseScan kappa_scan(const ConformalSurface& s, const std::vector<std::size_t>& centers,
                           const std::vector<double>& radii) {
    const auto& b = *s.base;
    const CurvatureSummary curv = scalar_curvature(s);
    const Field mass = conformal_mass(s);
    NoncollapseScan scan;
    scan.t = s.time_stamp;
    scan.rows.resize(centers.size() * radii.size());

#pragma omp parallel for schedule(dynamic)
    for (long long ci = 0; ci < static_cast<long long>(centers.size()); ++ci) {
        Field dist(b.node_count, std::numeric_limits<double>::infinity());
        {
            // Per-center Dijkstra; kept serial inside the parallel center loop.
            using Item = std::pair<double, unsigned>;
            std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
            dist[centers[static_cast<std::size_t>(ci)]] = 0.0;
            heap.emplace(0.0, static_cast<unsigned>(centers[static_cast<std::size_t>(ci)]));
            while (!heap.empty()) {
                const auto [d, u] = heap.top();
                heap.pop();
                if (d > dist[u]) continue;
                for (std::size_t k = b.adj_ptr[u]; k < b.adj_ptr[u + 1]; ++k) {
                    const unsigned v = b.adj_node[k];
                    const double nd = d + b.adj_len[k] * std::exp(0.5 * (s.phi[u] + s.phi[v]));
                    if (nd < dist[v]) {
                        dist[v] = nd;
                        heap.emplace(nd, v);
                    }
                }
            }
        }
        for (std::size_t ri = 0; ri < radii.size(); ++ri) {
            const double r = radii[ri];
            double sup_r = -std::numeric_limits<double>::infinity();
            double vol = 0.0;
            for (std::size_t i = 0; i < b.node_count; ++i) {
                if (dist[i] < r) {
                    sup_r = std::max(sup_r, curv.r[i]);
                    vol += mass[i];
                }
            }
            ScanRow row;
            row.center = centers[static_cast<std::size_t>(ci)];
            row.r = r;
            row.sup_r = sup_r;
            row.vol = vol;
            row.ratio = vol / (r * r);
            row.eligible = sup_r <= 1.0 / (r * r);
            scan.rows[static_cast<std::size_t>(ci) * radii.size() + ri] = row;
        }
    }

    for (const ScanRow& row : scan.rows) {
        if (!row.eligible) continue;
        if (!scan.any_eligible || row.ratio < scan.kappa) scan.kappa = row.ratio;
        scan.any_eligible = true;
    }
    return scan;
}

}  // namespace rf2d
