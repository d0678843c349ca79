#include "spectra_forge/frames.hpp"

#include <cmath>
#include <string>

#include "spectra_forge/operators.hpp"
#include "spectra_forge/trig_field.hpp"

namespace spectra_forge {

double AngleFunction::value(const RVec& x) const {
  const double t = x(coordinate);
  double v = slope * t;
  for (std::size_t n = 0; n < cos_coeffs.size(); ++n) v += cos_coeffs[n] * std::cos(n * t);
  for (std::size_t n = 1; n < sin_coeffs.size(); ++n) v += sin_coeffs[n] * std::sin(n * t);
  return v;
}

double AngleFunction::derivative(const RVec& x) const {
  const double t = x(coordinate);
  double v = slope;
  for (std::size_t n = 1; n < cos_coeffs.size(); ++n) v -= n * cos_coeffs[n] * std::sin(n * t);
  for (std::size_t n = 1; n < sin_coeffs.size(); ++n) v += n * sin_coeffs[n] * std::cos(n * t);
  return v;
}

namespace {

RMat plane_rotation(int d, int a, int b, double theta) {
  RMat r = RMat::Identity(d, d);
  const double c = std::cos(theta), s = std::sin(theta);
  r(a, a) = c;
  r(a, b) = s;
  r(b, a) = -s;
  r(b, b) = c;
  return r;
}

RMat plane_rotation_derivative(int d, int a, int b, double theta, double dtheta) {
  RMat r = RMat::Zero(d, d);
  const double c = std::cos(theta), s = std::sin(theta);
  r(a, a) = -s * dtheta;
  r(a, b) = c * dtheta;
  r(b, a) = -c * dtheta;
  r(b, b) = -s * dtheta;
  return r;
}

void validate(int d, const PlaneRotation& rot) {
  if (rot.a < 0 || rot.b < 0 || rot.a >= d || rot.b >= d || rot.a == rot.b)
    throw InvalidArgument("invalid rotation plane (" + std::to_string(rot.a) + ", " +
                          std::to_string(rot.b) + ") for d = " + std::to_string(d));
  if (rot.angle.coordinate < 0 || rot.angle.coordinate >= d)
    throw InvalidArgument("angle coordinate out of range");
  if (rot.angle.slope != 0.0)
    throw InvalidArgument("rotation angle must be periodic (nonzero linear term)");
}

}  // namespace

FrameField::FrameField(int d, std::vector<PlaneRotation> rotations)
    : d_(d), rotations_(std::move(rotations)) {
  if (d < 2) throw InvalidArgument("frames need d >= 2");
  for (const auto& r : rotations_) validate(d, r);
}

RMat FrameField::matrix(const RVec& x) const {
  RMat o = RMat::Identity(d_, d_);
  for (const auto& r : rotations_) o = plane_rotation(d_, r.a, r.b, r.angle.value(x)) * o;
  return o;
}

RMat FrameField::derivative(const RVec& x, int i) const {
  // Product rule over O = R_m ... R_1.
  RMat total = RMat::Zero(d_, d_);
  const std::size_t m = rotations_.size();
  for (std::size_t p = 0; p < m; ++p) {
    const auto& rp = rotations_[p];
    if (rp.angle.coordinate != i) continue;
    RMat term = RMat::Identity(d_, d_);
    for (std::size_t q = 0; q < m; ++q) {
      const auto& rq = rotations_[q];
      const double th = rq.angle.value(x);
      term = (q == p ? plane_rotation_derivative(d_, rq.a, rq.b, th, rq.angle.derivative(x))
                     : plane_rotation(d_, rq.a, rq.b, th)) *
             term;
    }
    total += term;
  }
  return total;
}

FrameField rotation_frame(int d, int a, int b, const AngleFunction& angle) {
  return FrameField(d, {PlaneRotation{a, b, angle}});
}

double ChristoffelData::antisymmetry_residual() const {
  double worst = 0.0;
  for (int k = 0; k < d_; ++k)
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j)
        worst = std::max(worst, std::abs((*this)(k, i, j) + (*this)(j, i, k)));
  return worst;
}

ChristoffelData christoffel(const FrameField& frame, const RVec& x) {
  const int d = frame.dim();
  const RMat o = frame.matrix(x);
  std::vector<RMat> dO;
  for (int a = 0; a < d; ++a) dO.push_back(frame.derivative(x, a));
  ChristoffelData g(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      // (X_i . d) X_j in coordinates.
      RVec dir = RVec::Zero(d);
      for (int a = 0; a < d; ++a) dir += o(i, a) * dO[a].row(j).transpose();
      for (int k = 0; k < d; ++k) g(k, i, j) = dir.dot(o.row(k).transpose());
    }
  return g;
}

std::vector<Mat> frame_gammas(const FrameField& frame, const CliffordModule& mod, const RVec& x) {
  const RMat o = frame.matrix(x);
  std::vector<Mat> out;
  for (int a = 0; a < mod.d; ++a) {
    Mat g = Mat::Zero(mod.r, mod.r);
    for (int k = 0; k < mod.d; ++k) g += o(k, a) * mod.gammas[k];
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

// L(X_i) = (1/4) sum_{k,n} Gamma^n_{ik} R_k R_n.
std::vector<Mat> frame_l(const ChristoffelData& g, const CliffordModule& mod) {
  std::vector<Mat> out;
  for (int i = 0; i < mod.d; ++i) {
    Mat l = Mat::Zero(mod.r, mod.r);
    for (int k = 0; k < mod.d; ++k)
      for (int n = 0; n < mod.d; ++n)
        if (g(n, i, k) != 0.0) l += g(n, i, k) * mod.gammas[k] * mod.gammas[n];
    out.push_back(0.25 * l);
  }
  return out;
}

}  // namespace

std::vector<Mat> frame_connection(const FrameField& frame, const CliffordModule& mod,
                                  const RVec& x) {
  if (frame.dim() != mod.d) throw ShapeMismatch("frame and module dimensions differ");
  const RMat o = frame.matrix(x);
  const auto l = frame_l(christoffel(frame, x), mod);
  std::vector<Mat> out;
  for (int a = 0; a < mod.d; ++a) {
    Mat b = Mat::Zero(mod.r, mod.r);
    for (int i = 0; i < mod.d; ++i) b += o(i, a) * l[i];
    out.push_back(std::move(b));
  }
  return out;
}

Mat massless_zeroth_order(const FrameField& frame, const CliffordModule& mod, const RVec& x) {
  const auto g = christoffel(frame, x);
  Mat out = Mat::Zero(mod.r, mod.r);
  for (int i = 0; i < mod.d; ++i)
    for (int j = 0; j < mod.d; ++j)
      for (int n = 0; n < mod.d; ++n)
        if (g(n, i, j) != 0.0)
          out += g(n, i, j) * mod.gammas[i] * mod.gammas[j] * mod.gammas[n];
  return 0.25 * out;
}

DiracOperatorSpec massless_dirac(const FrameField& frame, const CliffordModule& mod, int grid) {
  if (frame.dim() != mod.d) throw ShapeMismatch("frame and module dimensions differ");
  const int d = mod.d;
  DiracOperatorSpec D;
  D.mod = mod;
  for (int a = 0; a < d; ++a) {
    D.gamma_fields.push_back(sample_to_trig(
        d, mod.r, grid, [&](const RVec& x) { return frame_gammas(frame, mod, x)[a]; }));
    D.b.push_back(sample_to_trig(
        d, mod.r, grid, [&](const RVec& x) { return frame_connection(frame, mod, x)[a]; }));
  }
  D.psi = TrigMatrixField::zero(d, mod.r);
  D.compatible = true;
  return D;
}

double sub_massless_theoretical(const FrameField& frame, const RVec& x) {
  if (frame.dim() != 3) throw UnsupportedDimension("massless subprincipal formula is d = 3 only");
  const auto g = christoffel(frame, x);
  // Gamma_{12}^3 + Gamma_{23}^1 + Gamma_{31}^2 with 0-based storage g(k, i, j).
  return -(g(2, 0, 1) + g(0, 1, 2) + g(1, 2, 0)) / 2.0;
}

}  // namespace spectra_forge
