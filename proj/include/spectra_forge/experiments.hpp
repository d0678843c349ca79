#pragma once

#include <string>
#include <vector>

#include "spectra_forge/config.hpp"
#include "spectra_forge/csv.hpp"
#include "spectra_forge/spectral.hpp"

namespace spectra_forge {

/// One tolerance comparison. `kind` is "rel" (|v - e| <= tol |e|), "abs"
/// (|v - e| <= tol) or "max" (v <= tol).
struct Check {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string kind;
  bool pass = false;
};

Check check_rel(const std::string& name, double value, double expected, double tol);
Check check_abs(const std::string& name, double value, double expected, double tol);
Check check_max(const std::string& name, double value, double bound);

struct ExperimentResult {
  std::string experiment;
  std::vector<CsvTable> tables;
  std::vector<Check> checks;

  bool passed() const;
  CsvTable check_table() const;
};

/// Eigen-data for the configured spectral block.
SpectralData compute_spectrum(const DiracOperatorSpec& D, const SpectralConfig& spec);

/// Runs cfg.experiment. Library errors propagate.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes every table plus the check table as <out_dir>/<experiment>_<table>.csv.
/// Returns the paths written.
std::vector<std::string> write_result(const ExperimentResult& result, const ExperimentConfig& cfg,
                                      const std::string& out_dir);

}  // namespace spectra_forge
