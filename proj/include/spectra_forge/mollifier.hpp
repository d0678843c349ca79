#pragma once

#include <string>
#include <vector>

#include "spectra_forge/core.hpp"

namespace spectra_forge {

enum class MollifierKind { fourier_bump, gaussian };

/// `delta` is the Fourier half-width for the bump (plateau on [0, delta/2],
/// support in (-delta, delta)) and the width w for the gaussian. `grid` is
/// the number of table nodes per unit of mu for the bump.
struct MollifierSpec {
  MollifierKind kind = MollifierKind::fourier_bump;
  double delta = 6.0;
  int grid = 1024;
};

std::string to_string(MollifierKind k);
MollifierKind mollifier_kind_from_string(const std::string& s);

/// Even Schwartz function chi with int chi = 1.
class Mollifier {
 public:
  explicit Mollifier(const MollifierSpec& spec);

  double operator()(double mu) const;
  /// Fourier transform int chi(mu) e^{-i mu t} d mu.
  double fourier(double t) const;
  /// Scale on which chi varies: 2 pi / delta (bump) or w (gaussian).
  double effective_width() const;
  /// chi is treated as zero beyond this radius.
  double support_radius() const { return radius_; }
  const MollifierSpec& spec() const { return spec_; }
  /// Non-empty when the Fourier support reaches the shortest closed
  /// geodesic (length 2 pi) of the unit-period torus.
  std::string periodic_orbit_warning() const;

 private:
  double bump_direct(double mu, double* deriv) const;

  MollifierSpec spec_;
  double radius_ = 0.0;
  double h_ = 0.0;
  std::vector<double> value_;
  std::vector<double> slope_;
  RVec gl_t_, gl_w_;  // transition-region rule, weights folded with the step
};

Mollifier make_mollifier(const MollifierSpec& spec);

/// Smooth step 1 -> 0 on [0, 1]: f(1-u) / (f(1-u) + f(u)), f(s) = exp(-1/s).
double smooth_step_down(double u);

}  // namespace spectra_forge
