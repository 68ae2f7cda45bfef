#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "rf2d/surface.hpp"

namespace rf2d {

// Single-source distances in the metric e^{2φ}g_b: Dijkstra on the base
// distance graph with arc lengths scaled by e^{(φ_i+φ_j)/2}.
Field geodesic_distances(const ConformalSurface& s, std::size_t source);

// Σ e^{2φ}w over nodes with d(x,·) < r.
double ball_volume(const ConformalSurface& s, std::size_t center, double r);
double ball_volume(const ConformalSurface& s, const Field& distances, double r);

// Greedy farthest-point sample of `count` centers, seeded at node 0.
std::vector<std::size_t> farthest_point_sample(const ConformalSurface& s, std::size_t count);

// Two-sweep diameter estimate.
double approx_diameter(const ConformalSurface& s);

// Log-spaced radius grid in [12·h_eff, diameter/2]; the floor keeps the
// node-count volume noise at the smallest radius under ~2%.
std::vector<double> default_radius_grid(const ConformalSurface& s, std::size_t count = 12);

struct ScanRow {
    std::size_t center = 0;
    double r = 0.0;
    double sup_r = 0.0;  // sup of scalar curvature strictly inside the ball
    bool eligible = false;  // sup_R ≤ 1/r²
    double vol = 0.0;
    double ratio = 0.0;  // vol / r²
};

struct NoncollapseScan {
    double t = 0.0;
    std::vector<ScanRow> rows;
    double kappa = std::numeric_limits<double>::quiet_NaN();  // min eligible ratio
    bool any_eligible = false;
};

// Applies the curvature gate sup_{B(x,r)} R ≤ 1/r² per (center, radius) and
// reports the minimum eligible volume ratio.
NoncollapseScan kappa_scan(const ConformalSurface& s, const std::vector<std::size_t>& centers,
                           const std::vector<double>& radii);

}  // namespace rf2d
