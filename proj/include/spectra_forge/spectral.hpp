#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "spectra_forge/operators.hpp"

namespace spectra_forge {

/// Eigenpairs of D, sorted by mu (ties keep lattice lexicographic order).
///
/// Exact data: column j of `freq` is the lattice frequency k of record j and
/// column j of `vectors` its unit r-vector. Galerkin data: `basis` lists the
/// truncated frequencies, column j of `vectors` is the full coefficient
/// vector (block b is frequency basis[b] + offset(:, j), rows [r*b, r*b+r)),
/// and `freq` holds the dominant frequency as a tag.
struct SpectralData {
  int d = 0;
  int r = 0;
  bool exact = true;
  double cutoff = 0.0;
  double trust_cutoff = 0.0;
  double group_tol = 1e-9;
  RVec mu;
  Eigen::MatrixXi freq;
  Mat vectors;
  std::vector<Frequency> basis;
  Eigen::MatrixXi offset;  // Galerkin only; zero unless sector-decomposed

  std::size_t size() const { return static_cast<std::size_t>(mu.size()); }
  bool has_vectors() const { return vectors.cols() == mu.size() && mu.size() > 0; }
  Frequency frequency(std::size_t j) const;
  bool trusted(std::size_t j) const { return std::abs(mu(j)) <= trust_cutoff; }
  /// Half-open index ranges of degeneracy groups, |mu_i - mu_j| < tol (1 + |mu|).
  std::vector<std::pair<std::size_t, std::size_t>> groups() const;
};

/// Per-mode diagonalization of a constant-coefficient D, all |mu| <= lambda.
/// Throws InvalidArgument for non-constant specs and NumericalError when
/// d(k) = i gamma.k + Z is not Hermitian.
SpectralData exact_modes(const DiracOperatorSpec& D, double lambda);

/// Dense Hermitian eigendecomposition of D on span{e^{ik.x} v : |k|_inf <= K}.
/// trust_cutoff = K / 2. Throws ResourceError if (2K+1)^d r > size_limit and
/// NumericalError if the assembled matrix is not Hermitian to 1e-8.
SpectralData galerkin(const DiracOperatorSpec& D, int K, int size_limit = 4000);

/// Galerkin solve split into sectors of conserved momentum: axes on which no
/// coefficient field depends are diagonalized exactly, the remaining axes
/// use the box |k|_inf <= K. Keeps |mu| <= min(lambda, K/2), which is also the
/// trust cutoff.
SpectralData sector_galerkin(const DiracOperatorSpec& D, int K, double lambda,
                             int size_limit = 4000);

/// The assembled Galerkin matrix (for tests and diagnostics).
Mat galerkin_matrix(const DiracOperatorSpec& D, const std::vector<Frequency>& basis);

/// Re <F phi_j, phi_j> per record. Exact data use the zero-frequency
/// coefficient of F; Galerkin data use the full quadratic form.
RVec matrix_elements(const SpectralData& S, const TrigMatrixField& F);

/// Sums of per-record values over degeneracy groups, one entry per group.
struct GroupedValues {
  RVec mu;
  RVec value;
  std::vector<int> multiplicity;
};
GroupedValues group_sums(const SpectralData& S, const RVec& values);

/// Phi_j(x) = phi_j(x) phi_j(x)^dag with phi_j normalized in L^2(T^d).
std::vector<Mat> local_density(const SpectralData& S, const RVec& x);

/// Tr Phi_j(x) for every record (cheaper than local_density).
RVec local_trace(const SpectralData& S, const RVec& x);

/// sum_j w_j g(mu_j).
double smoothed_trace(const SpectralData& S, const RVec& weights,
                      const std::function<double(double)>& g);

/// |<s, phi_j>|^2 summed over records, and ||s||^2.
std::pair<double, double> parseval(const SpectralData& S, const TrigVectorField& s);

/// Copy with artificial zero modes appended (weight columns unchanged for
/// existing records); used to check zero-mode insensitivity.
SpectralData with_extra_zero_modes(const SpectralData& S, int count);

}  // namespace spectra_forge
