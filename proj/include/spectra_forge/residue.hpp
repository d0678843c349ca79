#pragma once

#include <functional>
#include <vector>

#include "spectra_forge/operators.hpp"
#include "spectra_forge/quadrature.hpp"
#include "spectra_forge/symbols.hpp"

namespace spectra_forge {

/// f(lambda omega) ~ sum_{j<=J} lambda^{m-j} s_j(omega) at each sphere node.
struct HomogeneousExpansion {
  double m = 0.0;
  int J = 0;
  RVec ladder;
  std::vector<std::vector<Mat>> components;  // [node][j]
  double residual = 0.0;  // max relative misfit over nodes and ladder samples

  const Mat& component(std::size_t node, int j) const { return components.at(node).at(j); }
  Mat eval(std::size_t node, double lambda) const;
};

/// Least-squares scaling fit per sphere node. Throws NumericalError when the
/// relative residual exceeds `tol`.
HomogeneousExpansion homogeneous_expand(const std::function<Mat(const RVec&)>& f, double m, int J,
                                        const SphereQuadrature& quad, const RVec& ladder,
                                        double tol = 1e-3);

/// (1/(2 pi)^d) int_T int_{|xi|=1} Tr sigma_{-d}(x, xi). The integrand is
/// checked for homogeneity of degree -d (relative 1e-8) at a few nodes.
double res_total(const SymbolFunction& symbol_minus_d, const SphereQuadrature& quad,
                 const TorusQuadrature& torus);

/// (1/(2 pi)^d) int Tr Sub(A) for A of order 1 - d.
double res_via_sub(const ClassicalSymbol& A, const SphereQuadrature& quad,
                   const TorusQuadrature& torus, const FiniteDifference& fd = {});

/// (1/(2 pi)^d) int Tr(Sub(A) sigma_B + sigma_A Sub(B)), orders summing to 1 - d.
double res_pair(const ClassicalSymbol& A, const ClassicalSymbol& B, const SphereQuadrature& quad,
                const TorusQuadrature& torus, const FiniteDifference& fd = {});

struct ResidueReport {
  double value = 0.0;
  double fit_residual = 0.0;
  double rescale_error = 0.0;  // expansion vs f at a lambda outside the ladder
};

/// A_k(F, D) = res(F (D + |D|)/2 |D|^{k-d-1}) for constant-coefficient D
/// and constant F, k in {0, 1}. Default ladder {4, 6, 8, 12, 16} max(1, ||Z||).
ResidueReport ak_via_residue(const DiracOperatorSpec& D, const Mat& F, int k,
                             int sphere_order = 16, RVec ladder = {});

/// || Sub(P^q) - q sigma_P^{q-1} Sub(P) || / || Sub(P^q) || at direction xi
/// for P = D^2 with constant coefficients, Sub(P^q) taken from the
/// homogeneous expansion of the matrix power p(xi)^q.
double sub_power_residual(const DiracOperatorSpec& D, double q, const RVec& xi,
                          const RVec& ladder, int J = 5);

}  // namespace spectra_forge
