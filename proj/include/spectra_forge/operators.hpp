#pragma once

#include <cstdint>
#include <vector>

#include "spectra_forge/clifford.hpp"
#include "spectra_forge/symbols.hpp"
#include "spectra_forge/trig_field.hpp"

namespace spectra_forge {

/// D = gamma^a(x) (d_a + b_a(x)) + psi(x) on sections of T^d x C^r.
///
/// `gamma_fields` is empty for the constant generators of `mod`; frame-built
/// operators carry x-dependent coordinate gammas. `compatible` records that
/// d_a gamma^c = [gamma^c, b_a], i.e. b is a Clifford-compatible connection and
/// psi is the potential relative to it.
struct DiracOperatorSpec {
  CliffordModule mod;
  std::vector<TrigMatrixField> gamma_fields;
  std::vector<TrigMatrixField> b;
  TrigMatrixField psi;
  bool compatible = false;

  int dim() const { return mod.d; }
  int rank() const { return mod.r; }
  /// True iff every coefficient field has support {0}.
  bool constant_flag() const;
  bool has_constant_gammas() const { return gamma_fields.empty(); }
  /// gamma^a(x); the module generators when gammas are constant.
  std::vector<Mat> gammas_at(const RVec& x) const;
  /// Coordinate gammas as fields (constants when gamma_fields is empty).
  std::vector<TrigMatrixField> gamma_field_list() const;
};

/// Constant-gamma operator; b defaults to zero.
DiracOperatorSpec make_dirac(const CliffordModule& mod, std::vector<TrigMatrixField> b,
                             TrigMatrixField psi);
DiracOperatorSpec make_dirac(const CliffordModule& mod, const Mat& psi_constant);

/// Zeroth-order coefficient Z = gamma^a b_a + psi, so D = gamma^a d_a + Z.
TrigMatrixField zeroth_order_field(const DiracOperatorSpec& D);

/// Exact application in Fourier space.
TrigVectorField apply(const DiracOperatorSpec& D, const TrigVectorField& s);

/// max over random section pairs of |<Du, v> - <u, Dv>| / (||u|| ||v||).
/// Each trial checks an independent pair and the diagonal pair (u, u).
double adjoint_residual(const DiracOperatorSpec& D, int trials, std::uint64_t seed);

/// Compatible connection plus potential describing the same operator.
struct CompatibleForm {
  std::vector<TrigMatrixField> connection;
  TrigMatrixField potential;
};

/// For constant gammas the compatible part of b_a is its scalar part
/// (tr b_a / r) Id, and the remainder moves into the potential:
/// psi' = psi + gamma^a (b_a - tr(b_a)/r Id). Frame-built operators are
/// returned as stored. Throws InvalidArgument for x-dependent gammas not
/// flagged compatible.
CompatibleForm compatible_form(const DiracOperatorSpec& D);

/// D^2 = Delta^{nabla_psi} + V with nabla_psi = nabla~ - L,
/// L_j = (gamma^j psi + psi gamma^j) / 2.
struct BWData {
  std::vector<TrigMatrixField> connection;  // coefficients of nabla_psi
  TrigMatrixField V;
};

/// Constant gammas only.
BWData bw_decompose(const DiracOperatorSpec& D);

/// -sum_j (d_j + A_j)(d_j + A_j) s.
TrigVectorField connection_laplacian(const std::vector<TrigMatrixField>& connection,
                                     const TrigVectorField& s);

/// max ||D^2 s - (Delta s + V s)|| / ||s|| over random sections.
double bw_residual(const DiracOperatorSpec& D, int trials, std::uint64_t seed);

/// (4 pi)^{-d/2} (hat(psi) - (d-2) psi) / 2 with psi the compatible potential.
Mat h1_density(const DiracOperatorSpec& D, const RVec& x);

/// (gamma^j b_j + b_j gamma^j)/2 + psi for the compatible form.
Mat sub_symbol_dirac(const DiracOperatorSpec& D, const RVec& x);

/// i (gamma^k psi + psi gamma^k - 2 b_k) xi_k for the compatible form.
Mat sub_symbol_laplacian(const DiracOperatorSpec& D, const RVec& x, const RVec& xi);

/// Depth-2 full symbol of D: i gamma^a xi_a, Z.
ClassicalSymbol dirac_symbol(const DiracOperatorSpec& D);

/// Depth-2 symbol of D^2: -(gamma.xi)^2, i(gamma^a d_a gamma^c + gamma^c Z + Z gamma^c) xi_c.
ClassicalSymbol laplacian_symbol(const DiracOperatorSpec& D);

/// Random self-adjoint operator: b_j anti-Hermitian-valued with frequencies
/// up to K, psi = psi_H - [gamma^j, b_j]/2 with psi_H Hermitian-valued.
DiracOperatorSpec random_self_adjoint_dirac(const CliffordModule& mod, int K, double scale,
                                            std::mt19937_64& rng);

}  // namespace spectra_forge
