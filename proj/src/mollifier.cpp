#include "spectra_forge/mollifier.hpp"

#include <cmath>

#include "spectra_forge/quadrature.hpp"

namespace spectra_forge {

std::string to_string(MollifierKind k) {
  return k == MollifierKind::gaussian ? "gaussian" : "fourier_bump";
}

MollifierKind mollifier_kind_from_string(const std::string& s) {
  if (s == "fourier_bump" || s == "bump") return MollifierKind::fourier_bump;
  if (s == "gaussian") return MollifierKind::gaussian;
  throw InvalidArgument("unknown mollifier kind '" + s + "'");
}

double smooth_step_down(double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - u)), b = std::exp(-1.0 / u);
  return a / (a + b);
}

Mollifier::Mollifier(const MollifierSpec& spec) : spec_(spec) {
  if (!(spec.delta > 0)) throw InvalidArgument("mollifier width must be positive");
  if (spec.kind == MollifierKind::gaussian) {
    radius_ = 10.0 * spec.delta;
    return;
  }
  if (spec.grid < 16) throw InvalidArgument("mollifier grid must be >= 16 nodes per unit");
  const double half = 0.5 * spec.delta;
  const GaussRule g = gauss_legendre(200, half, spec.delta);
  gl_t_ = g.nodes;
  gl_w_ = g.weights;
  for (Eigen::Index i = 0; i < gl_t_.size(); ++i)
    gl_w_(i) *= smooth_step_down((gl_t_(i) - half) / half);

  radius_ = 64.0 * effective_width();
  h_ = 1.0 / spec.grid;
  const auto n = static_cast<std::size_t>(std::ceil(radius_ / h_)) + 1;
  value_.resize(n);
  slope_.resize(n);
  for (std::size_t j = 0; j < n; ++j) value_[j] = bump_direct(j * h_, &slope_[j]);
}

double Mollifier::bump_direct(double mu, double* deriv) const {
  const double a = 0.5 * spec_.delta;
  double v, dv;
  if (std::abs(mu) < 1e-4) {
    v = a - a * a * a * mu * mu / 6.0;
    dv = -a * a * a * mu / 3.0;
  } else {
    const double s = std::sin(a * mu), c = std::cos(a * mu);
    v = s / mu;
    dv = (a * mu * c - s) / (mu * mu);
  }
  for (Eigen::Index i = 0; i < gl_t_.size(); ++i) {
    const double t = gl_t_(i);
    v += gl_w_(i) * std::cos(mu * t);
    dv -= gl_w_(i) * t * std::sin(mu * t);
  }
  if (deriv) *deriv = dv / kPi;
  return v / kPi;
}

double Mollifier::operator()(double mu) const {
  if (spec_.kind == MollifierKind::gaussian) {
    const double w = spec_.delta;
    return std::exp(-0.5 * mu * mu / (w * w)) / (w * std::sqrt(2.0 * kPi));
  }
  const double x = std::abs(mu);
  if (x >= radius_) return 0.0;
  const double pos = x / h_;
  const auto j = static_cast<std::size_t>(pos);
  if (j + 1 >= value_.size()) return 0.0;
  // Cubic Hermite interpolation on [x_j, x_{j+1}].
  const double s = pos - static_cast<double>(j);
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * value_[j] + h10 * h_ * slope_[j] + h01 * value_[j + 1] + h11 * h_ * slope_[j + 1];
}

double Mollifier::fourier(double t) const {
  if (spec_.kind == MollifierKind::gaussian) {
    const double w = spec_.delta;
    return std::exp(-0.5 * w * w * t * t);
  }
  const double half = 0.5 * spec_.delta;
  return smooth_step_down((std::abs(t) - half) / half);
}

double Mollifier::effective_width() const {
  return spec_.kind == MollifierKind::gaussian ? spec_.delta : 2.0 * kPi / spec_.delta;
}

std::string Mollifier::periodic_orbit_warning() const {
  if (spec_.kind == MollifierKind::fourier_bump && spec_.delta >= 2.0 * kPi)
    return "Fourier support reaches the first periodic orbit at t = 2 pi; coefficients are "
           "polluted by periodic-orbit terms";
  if (spec_.kind == MollifierKind::gaussian) {
    const double leak = fourier(2.0 * kPi);
    if (leak > 1e-6)
      return "gaussian Fourier tail at the first periodic orbit is " + std::to_string(leak);
  }
  return {};
}

Mollifier make_mollifier(const MollifierSpec& spec) { return Mollifier(spec); }

}  // namespace spectra_forge
