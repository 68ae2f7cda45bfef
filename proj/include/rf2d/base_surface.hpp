#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "rf2d/kernels.hpp"

namespace rf2d {

enum class SurfaceKind : std::uint8_t { Torus = 0, Sphere = 1 };

// Fixed background geometry. Conformal metrics are e^{2φ} times this.
//
// Torus: N×N periodic grid on [0,2π)², uniform node areas (2π/N)², 5-point
// stiffness with unit edge weights (so uᵀSu is the grid Dirichlet energy).
// Sphere: icosahedral subdivision of the unit sphere, cotangent stiffness on
// the flat triangles, node areas from barycentric lumping of the spherical
// triangle areas (these sum to 4π exactly, which keeps the discrete
// Gauss-Bonnet identity and the volume decay law exact).
struct BaseSurface {
    SurfaceKind kind = SurfaceKind::Torus;
    unsigned resolution = 0;  // torus: N; sphere: subdivision level
    std::size_t node_count = 0;
    int euler_characteristic = 0;
    double base_scalar_curvature = 0.0;  // constant: 0 torus, 2 unit sphere
    double base_area = 0.0;

    std::vector<double> weights;  // node quadrature weights, positive
    CsrMatrix stiffness;          // S: PSD, zero row sums, uᵀSu = ∫|∇u|²_b dvol_b

    // CFL length scale: torus grid spacing, sphere minimum edge length.
    double mesh_spacing = 0.0;

    // Node coordinates. Torus: (xs, ys) in [0,2π). Sphere: unit positions.
    std::vector<double> xs, ys;
    std::vector<std::array<double, 3>> pos;

    // Sphere triangulation (empty for the torus).
    std::vector<std::array<unsigned, 3>> faces;
    std::vector<double> face_flat_area;  // Euclidean triangle areas

    // Distance graph: each arc carries the base length of a short path
    // between nearby nodes. Torus uses a 32-direction chamfer mask (moves up
    // to (3,2)); the sphere uses all nodes within three mesh hops with
    // great-circle arc lengths. Both keep the shortest-path metrication
    // error under ~1.5%.
    std::vector<std::size_t> adj_ptr;
    std::vector<unsigned> adj_node;
    std::vector<double> adj_len;

    // Mesh edges (unordered, i<j), used for level-set perimeters.
    std::vector<std::array<unsigned, 2>> edges;

    double torus_side() const { return 2.0 * 3.14159265358979323846; }

    static std::shared_ptr<const BaseSurface> torus(unsigned n);
    static std::shared_ptr<const BaseSurface> sphere(unsigned level);
    static std::shared_ptr<const BaseSurface> make(SurfaceKind kind, unsigned resolution);
};

}  // namespace rf2d
