#pragma once

#include "spectra_forge/core.hpp"

namespace spectra_forge {

struct GaussRule {
  RVec nodes;
  RVec weights;
};

/// n-point Gauss rule for the weight (1 - t^2)^a on [-1, 1] (Golub-Welsch).
/// a = 0 is Gauss-Legendre, a = 1/2 Chebyshev of the second kind.
GaussRule gauss_gegenbauer(int n, double a);

/// Gauss-Legendre on [lo, hi].
GaussRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Vol(S^{d-1}) = 2 pi^{d/2} / Gamma(d/2).
double sphere_volume(int d);

/// Product rule on S^{d-1}, d in {2, 3, 4}: trapezoid on the circle, then
/// one Gegenbauer factor per extra dimension. Exact for polynomials of
/// degree <= order. Node j is column j of `nodes`.
struct SphereQuadrature {
  int d = 0;
  int order = 0;
  RMat nodes;
  RVec weights;

  Eigen::Index size() const { return weights.size(); }
};

SphereQuadrature sphere_quadrature(int d, int order);

/// Trapezoid rule on the torus of side 2 pi with G points per axis; exact
/// for trigonometric polynomials of degree < G.
struct TorusQuadrature {
  int d = 0;
  RMat nodes;
  RVec weights;

  Eigen::Index size() const { return weights.size(); }
};

TorusQuadrature torus_quadrature(int d, int G);

}  // namespace spectra_forge
