#include "spectra_forge/trig_field.hpp"

#include <algorithm>
#include <cmath>

namespace spectra_forge {

Frequency operator+(const Frequency& a, const Frequency& b) {
  Frequency out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Frequency operator-(const Frequency& a, const Frequency& b) {
  Frequency out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Frequency negate(const Frequency& a) {
  Frequency out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

namespace {

bool is_zero(const Frequency& n) {
  return std::all_of(n.begin(), n.end(), [](int v) { return v == 0; });
}

double phase(const Frequency& n, const RVec& x) {
  double p = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) p += n[i] * x(static_cast<Eigen::Index>(i));
  return p;
}

}  // namespace

// --- TrigMatrixField -------------------------------------------------------

TrigMatrixField TrigMatrixField::constant(int d, const Mat& c) {
  TrigMatrixField f(d, static_cast<int>(c.rows()));
  f.add_term(Frequency(d, 0), c);
  return f;
}

void TrigMatrixField::add_term(const Frequency& n, const Mat& c) {
  if (static_cast<int>(n.size()) != d_) throw ShapeMismatch("frequency has wrong dimension");
  if (c.rows() != r_ || c.cols() != r_) throw ShapeMismatch("coefficient has wrong size");
  auto it = coeffs_.find(n);
  if (it == coeffs_.end())
    coeffs_.emplace(n, c);
  else
    it->second += c;
}

void TrigMatrixField::add_hermitian_term(const Frequency& n, const Mat& c) {
  if (is_zero(n)) {
    add_term(n, 0.5 * (c + c.adjoint()));
    return;
  }
  add_term(n, c);
  add_term(negate(n), c.adjoint());
}

Mat TrigMatrixField::coefficient(const Frequency& n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? Mat::Zero(r_, r_) : it->second;
}

Mat TrigMatrixField::operator()(const RVec& x) const {
  Mat out = Mat::Zero(r_, r_);
  for (const auto& [n, c] : coeffs_) out += std::exp(kI * phase(n, x)) * c;
  return out;
}

TrigMatrixField TrigMatrixField::derivative(int j) const {
  TrigMatrixField out(d_, r_);
  for (const auto& [n, c] : coeffs_)
    if (n[j] != 0) out.coeffs_.emplace(n, (kI * static_cast<double>(n[j])) * c);
  return out;
}

TrigMatrixField TrigMatrixField::adjoint() const {
  TrigMatrixField out(d_, r_);
  for (const auto& [n, c] : coeffs_) out.add_term(negate(n), c.adjoint());
  return out;
}

bool TrigMatrixField::is_constant() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const auto& kv) { return is_zero(kv.first) || kv.second.norm() == 0.0; });
}

bool TrigMatrixField::is_hermitian(double tol) const {
  for (const auto& [n, c] : coeffs_)
    if ((c - coefficient(negate(n)).adjoint()).norm() > tol * std::max(1.0, c.norm())) return false;
  return true;
}

int TrigMatrixField::max_frequency() const {
  int m = 0;
  for (const auto& [n, c] : coeffs_)
    for (int v : n) m = std::max(m, std::abs(v));
  return m;
}

double TrigMatrixField::max_abs() const {
  double m = 0.0;
  for (const auto& [n, c] : coeffs_) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

TrigMatrixField TrigMatrixField::pruned(double tol) const {
  TrigMatrixField out(d_, r_);
  for (const auto& [n, c] : coeffs_)
    if (c.cwiseAbs().maxCoeff() > tol) out.coeffs_.emplace(n, c);
  return out;
}

TrigMatrixField& TrigMatrixField::operator+=(const TrigMatrixField& o) {
  if (d_ == 0 && r_ == 0) {
    *this = o;
    return *this;
  }
  for (const auto& [n, c] : o.coeffs_) add_term(n, c);
  return *this;
}

TrigMatrixField& TrigMatrixField::operator-=(const TrigMatrixField& o) {
  for (const auto& [n, c] : o.coeffs_) add_term(n, -c);
  return *this;
}

TrigMatrixField& TrigMatrixField::operator*=(cplx s) {
  for (auto& [n, c] : coeffs_) c *= s;
  return *this;
}

TrigMatrixField operator*(const TrigMatrixField& a, const TrigMatrixField& b) {
  if (a.r_ != b.r_ || a.d_ != b.d_) throw ShapeMismatch("field product shape mismatch");
  TrigMatrixField out(a.d_, a.r_);
  for (const auto& [n, ca] : a.coeffs_)
    for (const auto& [m, cb] : b.coeffs_) out.add_term(n + m, ca * cb);
  return out;
}

TrigMatrixField operator*(const Mat& m, const TrigMatrixField& a) {
  TrigMatrixField out(a.d_, a.r_);
  for (const auto& [n, c] : a.coeffs_) out.coeffs_.emplace(n, m * c);
  return out;
}

TrigMatrixField operator*(const TrigMatrixField& a, const Mat& m) {
  TrigMatrixField out(a.d_, a.r_);
  for (const auto& [n, c] : a.coeffs_) out.coeffs_.emplace(n, c * m);
  return out;
}

// --- TrigVectorField -------------------------------------------------------

void TrigVectorField::add_term(const Frequency& n, const Vec& v) {
  if (static_cast<int>(n.size()) != d_) throw ShapeMismatch("frequency has wrong dimension");
  if (v.size() != r_) throw ShapeMismatch("section value has wrong rank");
  auto it = coeffs_.find(n);
  if (it == coeffs_.end())
    coeffs_.emplace(n, v);
  else
    it->second += v;
}

Vec TrigVectorField::coefficient(const Frequency& n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? Vec::Zero(r_) : it->second;
}

Vec TrigVectorField::operator()(const RVec& x) const {
  Vec out = Vec::Zero(r_);
  for (const auto& [n, v] : coeffs_) out += std::exp(kI * phase(n, x)) * v;
  return out;
}

TrigVectorField TrigVectorField::derivative(int j) const {
  TrigVectorField out(d_, r_);
  for (const auto& [n, v] : coeffs_)
    if (n[j] != 0) out.coeffs_.emplace(n, (kI * static_cast<double>(n[j])) * v);
  return out;
}

cplx TrigVectorField::inner(const TrigVectorField& v) const {
  cplx s = 0.0;
  for (const auto& [n, a] : coeffs_) {
    auto it = v.coeffs_.find(n);
    if (it != v.coeffs_.end()) s += a.dot(it->second);
  }
  return s * std::pow(2.0 * kPi, d_);
}

double TrigVectorField::norm() const { return std::sqrt(std::max(0.0, inner(*this).real())); }

TrigVectorField& TrigVectorField::operator+=(const TrigVectorField& o) {
  for (const auto& [n, v] : o.coeffs_) add_term(n, v);
  return *this;
}

TrigVectorField& TrigVectorField::operator-=(const TrigVectorField& o) {
  for (const auto& [n, v] : o.coeffs_) add_term(n, -v);
  return *this;
}

TrigVectorField& TrigVectorField::operator*=(cplx s) {
  for (auto& [n, v] : coeffs_) v *= s;
  return *this;
}

TrigVectorField operator*(const TrigMatrixField& f, const TrigVectorField& s) {
  if (f.rank() != s.rank() || f.dim() != s.dim()) throw ShapeMismatch("field/section shape mismatch");
  TrigVectorField out(s.dim(), s.rank());
  for (const auto& [n, c] : f.coefficients())
    for (const auto& [m, v] : s.coefficients()) out.add_term(n + m, c * v);
  return out;
}

// --- helpers ---------------------------------------------------------------

std::vector<Frequency> frequency_box(int d, int K) {
  std::vector<Frequency> out;
  Frequency n(d, -K);
  while (true) {
    out.push_back(n);
    int i = d - 1;
    while (i >= 0 && n[i] == K) {
      n[i] = -K;
      --i;
    }
    if (i < 0) break;
    ++n[i];
  }
  return out;
}

TrigVectorField random_section(int d, int r, int K, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  TrigVectorField s(d, r);
  for (const auto& n : frequency_box(d, K)) {
    Vec v(r);
    for (int i = 0; i < r; ++i) v(i) = cplx(g(rng), g(rng));
    s.add_term(n, v);
  }
  return s;
}

TrigMatrixField random_matrix_field(int d, int r, int K, double scale, bool hermitian,
                                    std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  TrigMatrixField f(d, r);
  for (const auto& n : frequency_box(d, K)) {
    if (hermitian && n < negate(n)) continue;  // one representative per +/- pair
    Mat c(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) c(i, j) = scale * cplx(g(rng), g(rng));
    if (hermitian)
      f.add_hermitian_term(n, c);
    else
      f.add_term(n, c);
  }
  return f;
}

TrigMatrixField sample_to_trig(int d, int r, int G, const std::function<Mat(const RVec&)>& f,
                               double drop) {
  if (G < 2 || G % 2 != 0) throw InvalidArgument("sampling grid size must be even");
  long total = 1;
  for (int i = 0; i < d; ++i) total *= G;
  const double h = 2.0 * kPi / G;

  std::vector<Mat> data(static_cast<std::size_t>(total));
  RVec x(d);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (int a = d - 1; a >= 0; --a) {
      x(a) = h * static_cast<double>(rem % G);
      rem /= G;
    }
    data[static_cast<std::size_t>(idx)] = f(x);
  }

  // Separable DFT, axis by axis: c_n = G^{-d} sum_x f(x) e^{-i n.x}.
  std::vector<cplx> twiddle(static_cast<std::size_t>(G));
  for (int j = 0; j < G; ++j) twiddle[static_cast<std::size_t>(j)] = std::exp(-kI * (h * j));
  long stride = 1;
  for (int a = d - 1; a >= 0; --a) {
    std::vector<Mat> next(data.size(), Mat::Zero(r, r));
    for (long idx = 0; idx < total; ++idx) {
      const long pos = (idx / stride) % G;
      if (pos != 0) continue;
      for (int m = 0; m < G; ++m) {
        Mat acc = Mat::Zero(r, r);
        for (int j = 0; j < G; ++j)
          acc += twiddle[static_cast<std::size_t>((static_cast<long>(m) * j) % G)] *
                 data[static_cast<std::size_t>(idx + j * stride)];
        next[static_cast<std::size_t>(idx + m * stride)] = acc / static_cast<double>(G);
      }
    }
    data = std::move(next);
    stride *= G;
  }

  TrigMatrixField out(d, r);
  for (long idx = 0; idx < total; ++idx) {
    Frequency n(d);
    long rem = idx;
    bool nyquist = false;
    for (int a = d - 1; a >= 0; --a) {
      int m = static_cast<int>(rem % G);
      rem /= G;
      if (m == G / 2) nyquist = true;
      n[a] = m > G / 2 ? m - G : m;
    }
    const Mat& c = data[static_cast<std::size_t>(idx)];
    if (nyquist || c.cwiseAbs().maxCoeff() <= drop) continue;
    out.add_term(n, c);
  }
  return out;
}

}  // namespace spectra_forge
