#pragma once

#include <string>

// Closed-form reference solutions for the two model families. Kept free of
// any dependency on the numerical stack so they can arbitrate its results.

namespace rf2d::oracle {

enum class Family { RoundSphere, FlatTorus };

enum class Quantity { Volume, ScalarCurvature, Lambda0, ConformalSquared, ExtinctionTime };

struct ModelSolution {
    Family family = Family::RoundSphere;
    double size = 1.0;  // sphere: initial radius r0; torus: side length
};

// Closed-form value of `q` at flow time t. Sphere: vol = 4πr0² - 8πt,
// R = 2/(r0²-2t), λ0 = 1/(2(r0²-2t)), e^{2φ} = r0²-2t, T = r0²/2.
// Torus: everything static, λ0 = 0, no extinction.
double eval(const ModelSolution& m, Quantity q, double t);

// Neumann isoperimetric constants of the model bases, computed by the
// closed-form cut sweeps below.
double analytic_cni(Family family);

// sup over polar caps of min(area, co-area)^{1/2} / boundary length on the
// unit sphere; the maximum sits at the equator at 1/sqrt(2π).
double sphere_cap_sweep_cni();

// sup over axis-aligned band cuts of [0,side)²; the half-area band gives
// sqrt(2)/4 independent of the side length.
double torus_band_sweep_cni(double side);

// Geodesic-cap area on a round sphere of radius rho: 2π rho² (1 - cos(r/rho)).
double sphere_cap_area(double rho, double r);

}  // namespace rf2d::oracle
