#pragma once

#include <functional>
#include <map>
#include <random>

#include "spectra_forge/core.hpp"

namespace spectra_forge {

/// Matrix-valued trigonometric polynomial f(x) = sum_n c_n e^{i n.x} on the
/// torus of side 2*pi per axis.
class TrigMatrixField {
 public:
  using Coefficients = std::map<Frequency, Mat>;

  TrigMatrixField() = default;
  TrigMatrixField(int d, int r) : d_(d), r_(r) {}

  static TrigMatrixField zero(int d, int r) { return {d, r}; }
  static TrigMatrixField constant(int d, const Mat& c);

  int dim() const { return d_; }
  int rank() const { return r_; }
  const Coefficients& coefficients() const { return coeffs_; }

  /// Adds c to the coefficient at frequency n.
  void add_term(const Frequency& n, const Mat& c);
  /// Adds c e^{i n.x} + c^dag e^{-i n.x} (just c when n = 0).
  void add_hermitian_term(const Frequency& n, const Mat& c);

  /// Coefficient at n (zero matrix if absent).
  Mat coefficient(const Frequency& n) const;

  Mat operator()(const RVec& x) const;

  /// d/dx^j.
  TrigMatrixField derivative(int j) const;
  /// Pointwise adjoint.
  TrigMatrixField adjoint() const;

  bool is_constant() const;
  /// c_{-n} = c_n^dag for all n.
  bool is_hermitian(double tol = 1e-12) const;
  int max_frequency() const;
  /// Max |entry| over all coefficients.
  double max_abs() const;

  /// Drops coefficients whose entries are all below tol.
  TrigMatrixField pruned(double tol = 0.0) const;

  TrigMatrixField& operator+=(const TrigMatrixField& o);
  TrigMatrixField& operator-=(const TrigMatrixField& o);
  TrigMatrixField& operator*=(cplx s);

  friend TrigMatrixField operator+(TrigMatrixField a, const TrigMatrixField& b) { return a += b; }
  friend TrigMatrixField operator-(TrigMatrixField a, const TrigMatrixField& b) { return a -= b; }
  friend TrigMatrixField operator*(cplx s, TrigMatrixField a) { return a *= s; }
  /// Pointwise product (coefficient convolution).
  friend TrigMatrixField operator*(const TrigMatrixField& a, const TrigMatrixField& b);
  /// Left/right multiplication by a constant matrix.
  friend TrigMatrixField operator*(const Mat& m, const TrigMatrixField& a);
  friend TrigMatrixField operator*(const TrigMatrixField& a, const Mat& m);

 private:
  int d_ = 0;
  int r_ = 0;
  Coefficients coeffs_;
};

/// Section of the trivial bundle T^d x C^r with finitely many Fourier modes.
class TrigVectorField {
 public:
  using Coefficients = std::map<Frequency, Vec>;

  TrigVectorField() = default;
  TrigVectorField(int d, int r) : d_(d), r_(r) {}

  int dim() const { return d_; }
  int rank() const { return r_; }
  const Coefficients& coefficients() const { return coeffs_; }

  void add_term(const Frequency& n, const Vec& v);
  Vec coefficient(const Frequency& n) const;
  Vec operator()(const RVec& x) const;

  TrigVectorField derivative(int j) const;

  /// L^2 inner product <u, v> = int u^dag v dx (flat measure, volume (2 pi)^d).
  cplx inner(const TrigVectorField& v) const;
  double norm() const;

  TrigVectorField& operator+=(const TrigVectorField& o);
  TrigVectorField& operator-=(const TrigVectorField& o);
  TrigVectorField& operator*=(cplx s);
  friend TrigVectorField operator+(TrigVectorField a, const TrigVectorField& b) { return a += b; }
  friend TrigVectorField operator-(TrigVectorField a, const TrigVectorField& b) { return a -= b; }
  friend TrigVectorField operator*(cplx s, TrigVectorField a) { return a *= s; }
  friend TrigVectorField operator*(const TrigMatrixField& f, const TrigVectorField& s);

 private:
  int d_ = 0;
  int r_ = 0;
  Coefficients coeffs_;
};

/// All frequencies with |n|_inf <= K in lexicographic order.
std::vector<Frequency> frequency_box(int d, int K);

/// Random section with independent complex Gaussian coefficients on |n|_inf <= K.
TrigVectorField random_section(int d, int r, int K, std::mt19937_64& rng);

/// Random matrix field on |n|_inf <= K; Hermitian-valued when `hermitian`.
TrigMatrixField random_matrix_field(int d, int r, int K, double scale, bool hermitian,
                                    std::mt19937_64& rng);

/// Fourier coefficients of a sampled matrix function on a G^d grid
/// (G even), keeping |n|_inf < G/2 and entries above `drop`.
TrigMatrixField sample_to_trig(int d, int r, int G,
                               const std::function<Mat(const RVec&)>& f, double drop = 1e-15);

Frequency operator+(const Frequency& a, const Frequency& b);
Frequency operator-(const Frequency& a, const Frequency& b);
Frequency negate(const Frequency& a);

}  // namespace spectra_forge
