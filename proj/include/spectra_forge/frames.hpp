#pragma once

#include <array>
#include <vector>

#include "spectra_forge/clifford.hpp"
#include "spectra_forge/core.hpp"

namespace spectra_forge {

struct DiracOperatorSpec;

/// Real trigonometric polynomial in one coordinate,
/// theta(x) = slope * x^c + a_0 + sum_n (a_n cos(n x^c) + b_n sin(n x^c)).
/// Only slope == 0 gives a periodic angle.
struct AngleFunction {
  int coordinate = 0;
  double slope = 0.0;
  std::vector<double> cos_coeffs;  // a_0, a_1, ...
  std::vector<double> sin_coeffs;  // b_0 (ignored), b_1, ...

  double value(const RVec& x) const;
  /// d theta / d x^coordinate.
  double derivative(const RVec& x) const;
};

/// Rotation by theta(x) in the (a, b) coordinate plane.
struct PlaneRotation {
  int a = 0;
  int b = 1;
  AngleFunction angle;
};

/// Orthonormal frame O(x) = R_m(x) ... R_1(x); row k of O(x) holds X_k(x) in
/// coordinate components.
class FrameField {
 public:
  FrameField() = default;
  FrameField(int d, std::vector<PlaneRotation> rotations);

  int dim() const { return d_; }
  const std::vector<PlaneRotation>& rotations() const { return rotations_; }

  RMat matrix(const RVec& x) const;
  /// d O / d x^i.
  RMat derivative(const RVec& x, int i) const;

 private:
  int d_ = 0;
  std::vector<PlaneRotation> rotations_;
};

/// Single-rotation frame. Rejects invalid planes and non-periodic angles.
FrameField rotation_frame(int d, int a, int b, const AngleFunction& angle);

/// Gamma^k_{ij} with nabla_{X_i} X_j = Gamma^k_{ij} X_k for the flat connection,
/// stored as gamma(k, i, j).
class ChristoffelData {
 public:
  explicit ChristoffelData(int d) : d_(d), data_(static_cast<std::size_t>(d * d * d), 0.0) {}
  int dim() const { return d_; }
  double& operator()(int k, int i, int j) { return data_[idx(k, i, j)]; }
  double operator()(int k, int i, int j) const { return data_[idx(k, i, j)]; }
  /// max |Gamma^k_{ij} + Gamma^j_{ik}|.
  double antisymmetry_residual() const;

 private:
  std::size_t idx(int k, int i, int j) const {
    return static_cast<std::size_t>((k * d_ + i) * d_ + j);
  }
  int d_;
  std::vector<double> data_;
};

ChristoffelData christoffel(const FrameField& frame, const RVec& x);

/// Coordinate gamma matrices gamma(dx^a) = O_{ka}(x) R_k.
std::vector<Mat> frame_gammas(const FrameField& frame, const CliffordModule& mod, const RVec& x);

/// Compatible connection coefficients b_a = L(d_a) with
/// L(X) = R_k gamma(nabla_X X_k) / 4.
std::vector<Mat> frame_connection(const FrameField& frame, const CliffordModule& mod,
                                  const RVec& x);

/// R_i R_j gamma(nabla_{X_i} X_j) / 4, the zeroth-order term of the massless
/// operator written against the flat bundle connection.
Mat massless_zeroth_order(const FrameField& frame, const CliffordModule& mod, const RVec& x);

/// Generalized Dirac operator gamma(X) = g(X, X_k) R_k with compatible
/// connection flat + L; potential zero. Coefficients are sampled on a
/// `grid`^d lattice and truncated at roundoff.
DiracOperatorSpec massless_dirac(const FrameField& frame, const CliffordModule& mod,
                                 int grid = 32);

/// -(Gamma_{12}^3 + Gamma_{23}^1 + Gamma_{31}^2)/2 in the convention
/// nabla_{X_i} X_j = Gamma_{ij}^k X_k (d = 3 only).
double sub_massless_theoretical(const FrameField& frame, const RVec& x);

}  // namespace spectra_forge
