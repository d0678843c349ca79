#include "spectra_forge/quadrature.hpp"

#include <cmath>
#include <string>

namespace spectra_forge {

GaussRule gauss_gegenbauer(int n, double a) {
  if (n < 1) throw InvalidArgument("Gauss rule needs at least one node");
  if (!(a > -1.0)) throw InvalidArgument("Gegenbauer exponent must exceed -1");
  RVec diag = RVec::Zero(n);
  RVec sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) {
    const double two = 2.0 * k + 2.0 * a;
    sub(k - 1) = std::sqrt(k * (k + 2.0 * a) / (two * two - 1.0));
  }
  Eigen::SelfAdjointEigenSolver<RMat> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const double mu0 = std::sqrt(kPi) * std::tgamma(a + 1.0) / std::tgamma(a + 1.5);
  GaussRule g;
  g.nodes = es.eigenvalues();
  g.weights = mu0 * es.eigenvectors().row(0).transpose().array().square();
  // Symmetrize to remove roundoff asymmetry of the eigensolver.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (g.nodes(j) - g.nodes(i));
    const double w = 0.5 * (g.weights(i) + g.weights(j));
    g.nodes(i) = -x;
    g.nodes(j) = x;
    g.weights(i) = g.weights(j) = w;
  }
  if (n % 2 == 1) g.nodes(n / 2) = 0.0;
  return g;
}

GaussRule gauss_legendre(int n, double lo, double hi) {
  GaussRule g = gauss_gegenbauer(n, 0.0);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  g.nodes = (mid + half * g.nodes.array()).matrix();
  g.weights *= half;
  return g;
}

double sphere_volume(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

namespace {

SphereQuadrature circle(int order) {
  const int n = order + 1;
  SphereQuadrature q;
  q.d = 2;
  q.order = order;
  q.nodes.resize(2, n);
  q.weights = RVec::Constant(n, 2.0 * kPi / n);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * kPi * j / n;
    q.nodes(0, j) = std::cos(phi);
    q.nodes(1, j) = std::sin(phi);
  }
  return q;
}

// S^{d-1} from S^{d-2}: xi = (sqrt(1 - t^2) omega, t), dS = (1 - t^2)^{(d-3)/2} dt dS'.
SphereQuadrature lift(const SphereQuadrature& base, int order) {
  const int d = base.d + 1;
  const GaussRule g = gauss_gegenbauer(order / 2 + 1, 0.5 * (d - 3));
  SphereQuadrature q;
  q.d = d;
  q.order = order;
  const Eigen::Index n = g.nodes.size() * base.size();
  q.nodes.resize(d, n);
  q.weights.resize(n);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < g.nodes.size(); ++i) {
    const double t = g.nodes(i), s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (Eigen::Index j = 0; j < base.size(); ++j, ++col) {
      q.nodes.col(col).head(d - 1) = s * base.nodes.col(j);
      q.nodes(d - 1, col) = t;
      q.weights(col) = g.weights(i) * base.weights(j);
    }
  }
  return q;
}

}  // namespace

SphereQuadrature sphere_quadrature(int d, int order) {
  if (d < 2 || d > 4)
    throw UnsupportedDimension("sphere quadrature supports d in {2, 3, 4}, got " +
                               std::to_string(d));
  if (order < 0) throw InvalidArgument("quadrature order must be non-negative");
  SphereQuadrature q = circle(order);
  for (int k = 3; k <= d; ++k) q = lift(q, order);
  return q;
}

TorusQuadrature torus_quadrature(int d, int G) {
  if (d < 1 || G < 1) throw InvalidArgument("torus quadrature needs d >= 1 and G >= 1");
  TorusQuadrature q;
  q.d = d;
  const auto n = static_cast<Eigen::Index>(std::pow(G, d));
  q.nodes.resize(d, n);
  q.weights = RVec::Constant(n, std::pow(2.0 * kPi / G, d));
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index rem = j;
    for (int a = d - 1; a >= 0; --a) {
      q.nodes(a, j) = 2.0 * kPi * static_cast<double>(rem % G) / G;
      rem /= G;
    }
  }
  return q;
}

}  // namespace spectra_forge
