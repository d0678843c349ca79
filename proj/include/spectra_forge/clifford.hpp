#pragma once

#include <vector>

#include "spectra_forge/core.hpp"

namespace spectra_forge {

/// Complex Clifford module: anti-Hermitian generators with
/// gamma^j gamma^k + gamma^k gamma^j = -2 delta^{jk} Id.
struct CliffordModule {
  int d = 0;
  int r = 0;
  std::vector<Mat> gammas;

  /// gamma(X) = X_k gamma^k for a real d-vector X.
  Mat gamma(const RVec& X) const;
};

/// Irreducible module of rank 2^floor(d/2), built by the tensor-product
/// recursion. For d = 3 the generators are -i times the Pauli matrices.
/// Deterministic for each d in [1, 8].
CliffordModule build_gamma(int d);

/// Max over j,k of ||gamma^j gamma^k + gamma^k gamma^j + 2 delta^{jk} Id||.
double clifford_relation_residual(const CliffordModule& mod);

/// sum_k gamma^k psi gamma^k.
Mat hat(const CliffordModule& mod, const Mat& psi);

/// Eigenvalue of the hat map on grade-k endomorphisms: (-1)^k (2k - d).
int hat_eigenvalue(int d, int k);

/// Products gamma^{i_1} ... gamma^{i_k}, i_1 < ... < i_k, in lexicographic
/// order of the index sets.
std::vector<Mat> grade_basis(const CliffordModule& mod, int k);

/// Highest grade emitted by grade_project: d for even d, (d-1)/2 for odd d.
int max_grade(int d);

struct GradeDecomposition {
  std::vector<Mat> components;  // indexed by grade
  double residual_norm = 0.0;
};

/// Splits psi into hat-eigenspace components. Throws NumericalError if the
/// components fail to reconstruct psi or are not hat eigenvectors (which
/// happens for a non-irreducible module).
GradeDecomposition grade_project(const CliffordModule& mod, const Mat& psi,
                                 double tol = 1e-10);

/// sign * (gamma(X) psi + psi gamma(X)) / 2, sign in {+1, -1}.
Mat l_map(const CliffordModule& mod, const Mat& psi, const RVec& X, int sign);

/// max_{i,j} ||[l_map(psi, e_i, -1), gamma^j]||.
double commutant_report(const CliffordModule& mod, const Mat& psi);

/// ||hat(psi) - (d-2) psi|| <= tol * max(1, ||psi||).
bool is_generalized_potential(const CliffordModule& mod, const Mat& psi,
                              double tol = 1e-10);

}  // namespace spectra_forge
