#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectra_forge/mollifier.hpp"
#include "spectra_forge/operators.hpp"

namespace spectra_forge {

/// Thrown for malformed configs; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// One Fourier term coeff * gamma^{i_1} ... gamma^{i_k} e^{i k.x} (indices
/// 1-based), or an explicit `entries` matrix in place of the Clifford product.
/// `hermitian` adds the conjugate term at -k.
struct TermSpec {
  Frequency k;
  cplx coeff{1.0, 0.0};
  std::vector<int> clifford;
  std::optional<std::vector<std::vector<cplx>>> entries;
  bool hermitian = false;

  bool operator==(const TermSpec&) const = default;
};

/// Rotation by theta(x^coordinate) in the plane (a, b); all indices 1-based.
struct FrameSpec {
  int a = 2;
  int b = 3;
  int coordinate = 1;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  int grid = 32;

  bool operator==(const FrameSpec&) const = default;
};

struct OperatorConfig {
  std::vector<TermSpec> psi;
  std::vector<std::vector<TermSpec>> b;  // empty or one list per coordinate
  std::optional<FrameSpec> frame;

  bool operator==(const OperatorConfig&) const = default;
};

/// method: "exact" (constant coefficients), "galerkin" or "sector".
struct SpectralConfig {
  std::string method = "exact";
  double lambda = 40.0;
  int K = 6;
  int size_limit = 4000;

  bool operator==(const SpectralConfig&) const = default;
};

struct ExperimentParams {
  double window_lo = 0.0;  // 0: default window
  double window_hi = 0.0;
  int points = 41;
  int fit_terms = 3;
  MollifierSpec mollifier;
  std::vector<double> ladder;  // empty: default heat ladder
  std::vector<double> N{5.0, 7.0};
  std::vector<int> k{0, 1};
  std::vector<double> s;  // continued zeta evaluation points
  std::vector<std::vector<double>> x;  // local counting points; empty: origin
  int sphere_order = 16;
  int samples = 50;
  int trials = 20;
  int clifford_d = 0;  // 0: all of 1..6
  std::map<std::string, double> tolerance;  // overrides per-check defaults

  bool operator==(const ExperimentParams& o) const;
};

struct ExperimentConfig {
  std::string experiment;
  int d = 3;
  OperatorConfig op;
  std::vector<TermSpec> F;  // empty: identity
  SpectralConfig spectral;
  ExperimentParams params;
  std::string out = ".";
  std::uint64_t seed = 0;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Canonical JSON with every default filled in.
std::string dump_config(const ExperimentConfig& cfg);
/// FNV-1a of dump_config with `out` cleared, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Field of sum of terms; identity when `terms` is empty and `empty_is_identity`.
TrigMatrixField build_field(const CliffordModule& mod, const std::vector<TermSpec>& terms,
                            bool empty_is_identity);
DiracOperatorSpec build_operator(const ExperimentConfig& cfg);

/// Catalog of experiment names with one-line descriptions.
const std::vector<std::pair<std::string, std::string>>& experiment_catalog();

}  // namespace spectra_forge
