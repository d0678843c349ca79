#include "spectra_forge/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spectra_forge/quadrature.hpp"

namespace spectra_forge {

std::vector<FitTerm> power_terms(const std::vector<double>& powers) {
  std::vector<FitTerm> out;
  for (double p : powers) out.push_back({p, 0});
  return out;
}

namespace {

double term_value(const FitTerm& t, double x) {
  double v = std::pow(x, t.power);
  if (t.log_power) v *= std::pow(std::log(x), t.log_power);
  return v;
}

bool same_term(const FitTerm& t, double power, int log_power) {
  return std::abs(t.power - power) < 1e-12 && t.log_power == log_power;
}

}  // namespace

int AsymptoticFit::index_of(double power, int log_power) const {
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (same_term(terms[i], power, log_power)) return static_cast<int>(i);
  throw InvalidArgument("fit has no term with power " + std::to_string(power));
}

double AsymptoticFit::coefficient(double power, int log_power) const {
  return coefficients(index_of(power, log_power));
}

double AsymptoticFit::uncertainty_of(double power, int log_power) const {
  return uncertainty(index_of(power, log_power));
}

double AsymptoticFit::eval(double x) const {
  double s = 0;
  for (std::size_t i = 0; i < terms.size(); ++i)
    s += coefficients(static_cast<Eigen::Index>(i)) * term_value(terms[i], x);
  return s;
}

AsymptoticFit weighted_fit(const RVec& x, const RVec& y, const std::vector<FitTerm>& terms,
                           const RVec& weights) {
  const Eigen::Index n = x.size();
  const auto p = static_cast<Eigen::Index>(terms.size());
  if (y.size() != n || weights.size() != n) throw ShapeMismatch("fit data sizes differ");
  if (p == 0) throw InvalidArgument("fit needs at least one term");
  if (n < p) throw InvalidArgument("fewer samples than model terms");
  RMat A(n, p);
  RVec b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j)
      A(i, j) = weights(i) * term_value(terms[static_cast<std::size_t>(j)], x(i));
    b(i) = weights(i) * y(i);
  }
  RVec scale = A.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < p; ++j)
    if (scale(j) == 0.0) scale(j) = 1.0;
  const RMat As = A * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<RMat> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec sv = svd.singularValues();
  const RVec cs = svd.solve(b);

  AsymptoticFit fit;
  fit.terms = terms;
  fit.samples = static_cast<int>(n);
  fit.window_lo = x.minCoeff();
  fit.window_hi = x.maxCoeff();
  fit.condition = sv(p - 1) > 0 ? sv(0) / sv(p - 1) : INFINITY;
  fit.ill_conditioned = !(fit.condition <= kIllConditioned);
  fit.coefficients = cs.cwiseQuotient(scale);
  const RVec res = As * cs - b;
  fit.residual = res.cwiseAbs().maxCoeff();
  const double dof = static_cast<double>(n - p);
  const double sigma2 = dof > 0 ? res.squaredNorm() / dof : 0.0;
  RVec inv_sv2(p);
  for (Eigen::Index j = 0; j < p; ++j) inv_sv2(j) = sv(j) > 0 ? 1.0 / (sv(j) * sv(j)) : 0.0;
  const RMat cov = svd.matrixV() * inv_sv2.asDiagonal() * svd.matrixV().transpose();
  fit.uncertainty.resize(p);
  for (Eigen::Index j = 0; j < p; ++j)
    fit.uncertainty(j) = std::sqrt(sigma2 * std::max(0.0, cov(j, j))) / scale(j);
  return fit;
}

// ---------------------------------------------------------------- counting

RVec linear_grid(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw InvalidArgument("grid needs n >= 2 and hi > lo");
  return RVec::LinSpaced(n, lo, hi);
}

RVec mollified_counting(const RVec& mu_sorted, const RVec& weights, const Mollifier& chi,
                        const RVec& grid, double cutoff) {
  if (mu_sorted.size() != weights.size()) throw ShapeMismatch("one weight per eigenvalue expected");
  if (grid.size() == 0) return {};
  const double safe = grid.maxCoeff() + 6.0 * chi.effective_width();
  if (!(safe < cutoff))
    throw InvalidArgument("grid maximum plus six mollifier widths (" + std::to_string(safe) +
                          ") reaches the spectral cutoff " + std::to_string(cutoff));
  const double R = chi.support_radius();
  const double* begin = mu_sorted.data();
  const double* end = begin + mu_sorted.size();
  RVec out(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double m = grid(i);
    const double* lo = std::lower_bound(begin, end, m - R);
    const double* hi = std::upper_bound(lo, end, m + R);
    long double s = 0;
    for (const double* p = lo; p != hi; ++p) s += weights(p - begin) * chi(m - *p);
    out(i) = static_cast<double>(s);
  }
  return out;
}

AsymptoticFit fit_counting(const RVec& grid, const RVec& series, int d, int K) {
  if (K < 1 || K > 3) throw InvalidArgument("counting fit supports 1 <= K <= 3 terms");
  std::vector<FitTerm> terms;
  for (int k = 0; k < K; ++k) terms.push_back({static_cast<double>(d - 1 - k), 0});
  RVec w(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) w(i) = std::pow(grid(i), -(d - 1.0));
  return weighted_fit(grid, series, terms, w);
}

CountingResult counting_fit(const SpectralData& S, const RVec& weights, const Mollifier& chi,
                            double lo, double hi, int points, int K) {
  if (!(hi > lo)) {
    lo = S.cutoff / 3.0;
    hi = 2.0 * S.cutoff / 3.0;
  }
  CountingResult out;
  out.grid = linear_grid(lo, hi, points);
  out.series = mollified_counting(S.mu, weights, chi, out.grid, S.cutoff);
  out.fit = fit_counting(out.grid, out.series, S.d, K);
  return out;
}

std::pair<RVec, RVec> abs_spectrum(const RVec& mu, const RVec& weights) {
  if (mu.size() != weights.size()) throw ShapeMismatch("one weight per eigenvalue expected");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(mu.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(mu(a)) < std::abs(mu(b));
  });
  RVec m(mu.size()), w(mu.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    m(static_cast<Eigen::Index>(i)) = std::abs(mu(order[i]));
    w(static_cast<Eigen::Index>(i)) = weights(order[i]);
  }
  return {m, w};
}

// ------------------------------------------------------------- closed forms

namespace {

int default_torus_grid(const DiracOperatorSpec& D, const TrigMatrixField& F) {
  int m = F.max_frequency();
  for (const auto& g : D.gamma_fields) m = std::max(m, F.max_frequency() + g.max_frequency());
  const TrigMatrixField psi = compatible_form(D).potential;
  m = std::max(m, F.max_frequency() + psi.max_frequency());
  return std::max(2, 2 * m + 2);
}

}  // namespace

double a0_theoretical(const DiracOperatorSpec& D, const TrigMatrixField& F, int sphere_order,
                      int torus_grid) {
  const int d = D.dim();
  if (F.rank() != D.rank() || F.dim() != d) throw ShapeMismatch("endomorphism shape");
  if (torus_grid <= 0) torus_grid = default_torus_grid(D, F);
  const TorusQuadrature tq = torus_quadrature(d, torus_grid);
  double total = 0;
  if (d == 1) {
    // S^0 = {+1, -1}.
    for (Eigen::Index i = 0; i < tq.size(); ++i) {
      const RVec x = tq.nodes.col(i);
      const Mat f = F(x);
      const Mat g = D.gammas_at(x)[0];
      for (double s : {1.0, -1.0}) total += tq.weights(i) * (f + f * (kI * s * g)).trace().real();
    }
  } else {
    const SphereQuadrature sq = sphere_quadrature(d, sphere_order);
    for (Eigen::Index i = 0; i < tq.size(); ++i) {
      const RVec x = tq.nodes.col(i);
      const Mat f = F(x);
      const auto g = D.gammas_at(x);
      for (Eigen::Index j = 0; j < sq.size(); ++j) {
        Mat sigma = Mat::Zero(D.rank(), D.rank());
        for (int a = 0; a < d; ++a) sigma += (kI * sq.nodes(a, j)) * g[a];
        total += tq.weights(i) * sq.weights(j) * (f + f * sigma).trace().real();
      }
    }
  }
  return total / (2.0 * std::pow(2.0 * kPi, d));
}

double a1_theoretical_dirac(const DiracOperatorSpec& D, const TrigMatrixField& F, int torus_grid) {
  const int d = D.dim();
  if (F.rank() != D.rank() || F.dim() != d) throw ShapeMismatch("endomorphism shape");
  if (torus_grid <= 0) torus_grid = default_torus_grid(D, F);
  const TorusQuadrature tq = torus_quadrature(d, torus_grid);
  double total = 0;
  for (Eigen::Index i = 0; i < tq.size(); ++i) {
    const RVec x = tq.nodes.col(i);
    total += tq.weights(i) * (F(x) * h1_density(D, x)).trace().real();
  }
  return total / std::tgamma(0.5 * d);
}

namespace {

double laplace_integral(const ClassicalSymbol& A, const SymbolFunction& sub_P, int d,
                        int sphere_order, int torus_grid, const FiniteDifference& fd) {
  const SphereQuadrature sq = sphere_quadrature(d, sphere_order);
  const TorusQuadrature tq = torus_quadrature(d, torus_grid);
  const double factor = 0.5 * (1.0 - d - A.order);
  double total = 0;
  for (Eigen::Index i = 0; i < tq.size(); ++i) {
    const RVec x = tq.nodes.col(i);
    for (Eigen::Index j = 0; j < sq.size(); ++j) {
      const RVec xi = sq.nodes.col(j);
      const Mat integrand =
          sub_symbol_generic(A, x, xi, fd) + factor * A.principal(x, xi) * sub_P(x, xi);
      total += tq.weights(i) * sq.weights(j) * integrand.trace().real();
    }
  }
  return total / std::pow(2.0 * kPi, d);
}

}  // namespace

double a1_theoretical_laplace(const ClassicalSymbol& A, const SymbolFunction& sub_P, int d,
                              int sphere_order, int torus_grid, const FiniteDifference& fd,
                              double tol) {
  if (A.depth() < 2) throw InvalidArgument("symbol depth must be at least 2");
  const double coarse = laplace_integral(A, sub_P, d, sphere_order, torus_grid, fd);
  const double fine = laplace_integral(A, sub_P, d, sphere_order + 4, torus_grid + 2, fd);
  if (std::abs(fine - coarse) > tol * (1.0 + std::abs(fine)))
    throw NumericalError("quadrature refinement changed the second coefficient by " +
                         std::to_string(std::abs(fine - coarse)) + "; raise the order");
  return fine;
}

ClassicalSymbol endomorphism_times_dirac(const DiracOperatorSpec& D, const TrigMatrixField& F) {
  const ClassicalSymbol sd = dirac_symbol(D);
  ClassicalSymbol s;
  s.order = 1.0;
  s.rank = D.rank();
  const auto p0 = sd.components[0], p1 = sd.components[1];
  s.components.push_back([F, p0](const RVec& x, const RVec& xi) -> Mat { return F(x) * p0(x, xi); });
  s.components.push_back([F, p1](const RVec& x, const RVec& xi) -> Mat { return F(x) * p1(x, xi); });
  return s;
}

// -------------------------------------------------------------------- heat

RVec default_heat_ladder(double cutoff, int samples) {
  if (!(cutoff > 0) || samples < 1) throw InvalidArgument("ladder needs cutoff > 0, samples >= 1");
  const double tmin = 14.0 * std::log(10.0) / (cutoff * cutoff);
  const double p = std::floor(-2.0 * std::log2(tmin)) / 2.0;
  RVec t(samples);
  for (int k = 0; k < samples; ++k) t(k) = std::pow(2.0, -p + 0.5 * k);
  return t;
}

std::vector<FitTerm> heat_terms(int d, int count) {
  std::vector<FitTerm> out;
  for (int j = 0; j < count; ++j) out.push_back({-0.5 * (d - j), 0});
  return out;
}

double heat_trace(const SpectralData& S, const RVec& weights, HeatMode mode, double t) {
  if (weights.size() != S.mu.size()) throw ShapeMismatch("one weight per record expected");
  long double s = 0;
  for (Eigen::Index j = 0; j < S.mu.size(); ++j) {
    const double m = S.mu(j);
    const double e = std::exp(-t * m * m);
    switch (mode) {
      case HeatMode::plain:
        s += weights(j) * e;
        break;
      case HeatMode::signed_trace:
        s += weights(j) * m * e;
        break;
      case HeatMode::sign:
        if (m != 0.0) s += weights(j) * (m > 0 ? e : -e);
        break;
    }
  }
  return static_cast<double>(s);
}

HeatFitResult heat_fit(const SpectralData& S, const RVec& weights, HeatMode mode, const RVec& t,
                       const std::vector<FitTerm>& terms) {
  if (terms.empty()) throw InvalidArgument("heat fit needs model terms");
  std::vector<double> ts, vals;
  HeatFitResult out;
  const double count = static_cast<double>(S.size());
  const RVec absw = weights.cwiseAbs();
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (!(t(i) > 0)) throw InvalidArgument("heat samples need t > 0");
    const double scale = heat_trace(S, absw, HeatMode::plain, t(i));
    const double trunc = std::exp(-t(i) * S.cutoff * S.cutoff) * count;
    if (trunc >= 1e-12 * scale) {
      ++out.rejected;
      continue;
    }
    ts.push_back(t(i));
    vals.push_back(heat_trace(S, weights, mode, t(i)));
  }
  if (ts.size() < terms.size())
    throw NumericalError("only " + std::to_string(ts.size()) +
                         " heat samples survive the truncation check; need " +
                         std::to_string(terms.size()));
  out.t = Eigen::Map<RVec>(ts.data(), static_cast<Eigen::Index>(ts.size()));
  out.trace = Eigen::Map<RVec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  RVec w(out.t.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::pow(out.t(i), -terms[0].power);
  out.fit = weighted_fit(out.t, out.trace, terms, w);
  return out;
}

// ---------------------------------------------------------------- zeta/eta

double residue_from_heat(const AsymptoticFit& heat, double s0) {
  return 2.0 * heat.coefficient(-0.5 * s0) / std::tgamma(0.5 * s0);
}

namespace {

RVec drop_zero_modes(const SpectralData& S, const RVec& weights) {
  RVec w = weights;
  for (Eigen::Index j = 0; j < S.mu.size(); ++j)
    if (std::abs(S.mu(j)) <= 1e-12) w(j) = 0.0;
  return w;
}

void check_regularized(int d, double s0, int K) {
  for (int j = 0; j < K; ++j)
    if (std::abs(0.5 * (d - j) - 0.5 * s0) < 1e-12) return;
  throw InvalidArgument("K = " + std::to_string(K) +
                        " subtraction terms do not regularize the pole at s = " +
                        std::to_string(s0));
}

}  // namespace

ZetaResult zeta_residue(const SpectralData& S, const RVec& weights, double s0, int K,
                        RVec ladder) {
  check_regularized(S.d, s0, K);
  if (ladder.size() == 0) ladder = default_heat_ladder(S.cutoff);
  ZetaResult out;
  out.heat = heat_fit(S, drop_zero_modes(S, weights), HeatMode::plain, ladder, heat_terms(S.d));
  out.residue = residue_from_heat(out.heat.fit, s0);
  return out;
}

ZetaResult eta_residue(const SpectralData& S, const RVec& weights, double s0, int K,
                       RVec ladder) {
  check_regularized(S.d, s0, K);
  if (ladder.size() == 0) ladder = default_heat_ladder(S.cutoff);
  ZetaResult out;
  out.heat = heat_fit(S, drop_zero_modes(S, weights), HeatMode::sign, ladder, heat_terms(S.d));
  out.residue = residue_from_heat(out.heat.fit, s0);
  return out;
}

double zeta_continued(const SpectralData& S, const RVec& weights, double s, int K, RVec ladder) {
  const int d = S.d;
  const auto terms = heat_terms(d);
  if (K < 1 || K > static_cast<int>(terms.size())) throw InvalidArgument("invalid K");
  for (int j = 0; j < K; ++j)
    if (std::abs(s / 2.0 + terms[j].power) < 1e-9)
      throw InvalidArgument("continuation evaluated at a pole");
  if (ladder.size() == 0) ladder = default_heat_ladder(S.cutoff);
  const RVec w = drop_zero_modes(S, weights);
  const AsymptoticFit fit = heat_fit(S, w, HeatMode::plain, ladder, terms).fit;
  const double z = 0.5 * s;  // Mellin variable: zeta(2z) Gamma(z)

  // Merge equal lambda^2 values to make repeated heat evaluations cheap.
  std::vector<std::pair<double, double>> lw;
  for (Eigen::Index j = 0; j < S.mu.size(); ++j)
    if (w(j) != 0.0) lw.emplace_back(S.mu(j) * S.mu(j), w(j));
  std::sort(lw.begin(), lw.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& [l2, wt] : lw) {
    if (!merged.empty() && std::abs(l2 - merged.back().first) <= 1e-12 * (1.0 + l2))
      merged.back().second += wt;
    else
      merged.emplace_back(l2, wt);
  }
  auto f = [&](double t) {
    long double acc = 0;
    for (const auto& [l2, wt] : merged) {
      const double e = t * l2;
      if (e > 745.0) break;
      acc += wt * std::exp(-e);
    }
    return static_cast<double>(acc);
  };
  const double t_lo = ladder.minCoeff();
  double total = 0;
  // (0, t_lo]: the remaining fitted terms, integrated in closed form.
  for (std::size_t j = static_cast<std::size_t>(K); j < terms.size(); ++j) {
    const double a = z + terms[j].power;
    if (!(a > 0)) throw InvalidArgument("continuation needs s above the unsubtracted exponents");
    total += fit.coefficients(static_cast<Eigen::Index>(j)) * std::pow(t_lo, a) / a;
  }
  // [t_lo, 1]: data minus the K subtracted terms, Gauss-Legendre in log t.
  const GaussRule g1 = gauss_legendre(200, std::log(t_lo), 0.0);
  for (Eigen::Index i = 0; i < g1.nodes.size(); ++i) {
    const double t = std::exp(g1.nodes(i));
    double r = f(t);
    for (int j = 0; j < K; ++j) r -= fit.coefficients(j) * std::pow(t, terms[j].power);
    total += g1.weights(i) * std::pow(t, z) * r;
  }
  // Subtracted terms: sum c_j / (z + power_j).
  for (int j = 0; j < K; ++j) total += fit.coefficients(j) / (z + terms[j].power);
  // [1, inf): data, Gauss-Legendre in log t up to where the smallest mode has decayed.
  if (!merged.empty()) {
    const double l2min = merged.front().first;
    const double T = std::max(2.0, 50.0 / l2min);
    const GaussRule g2 = gauss_legendre(400, 0.0, std::log(T));
    for (Eigen::Index i = 0; i < g2.nodes.size(); ++i) {
      const double t = std::exp(g2.nodes(i));
      total += g2.weights(i) * std::pow(t, z) * f(t);
    }
  }
  return total / std::tgamma(z);
}

// --------------------------------------------------------------- resolvent

double resolvent_factor(int d, double m, int k, double N) {
  return 0.5 * std::tgamma(0.5 * (d + m - k)) * std::tgamma(0.5 * (N + k - d - m)) /
         std::tgamma(0.5 * N);
}

ResolventResult resolvent_fit(const SpectralData& S, const RVec& weights, double N, RVec ladder,
                              std::vector<FitTerm> terms, double max_tail_fraction) {
  const int d = S.d;
  if (!(N > d)) throw InvalidArgument("resolvent exponent N must exceed d");
  if (weights.size() != S.mu.size()) throw ShapeMismatch("one weight per record expected");
  if (ladder.size() == 0) ladder = default_heat_ladder(S.cutoff);
  if (terms.empty()) {
    for (int k = 0; k < 5; ++k) terms.push_back({-0.5 * (d - k), 0});
    terms.push_back({0.0, 1});
  }
  ResolventResult out;
  out.heat = heat_fit(S, weights, HeatMode::plain, ladder, heat_terms(d)).fit;

  // Density of |mu| implied by the heat coefficients c_a t^{-a}, a > 0.
  std::vector<std::pair<double, double>> dens_terms;
  for (std::size_t i = 0; i < out.heat.terms.size(); ++i) {
    const double a = -out.heat.terms[i].power;
    if (a > 0 && out.heat.terms[i].log_power == 0)
      dens_terms.emplace_back(a, out.heat.coefficients(static_cast<Eigen::Index>(i)));
  }
  auto density = [&](double lam) {
    double s = 0;
    for (const auto& [a, c] : dens_terms) s += c * 2.0 * std::pow(lam, 2.0 * a - 1.0) / std::tgamma(a);
    return s;
  };
  const double lo = 0.5 * S.cutoff, hi = S.cutoff;
  auto rho = [&](double lam) { return smooth_step_down((lam - lo) / (hi - lo)); };
  const GaussRule gm = gauss_legendre(200, lo, hi);
  const GaussRule gu = gauss_legendre(200, 0.0, 1.0);

  out.t = ladder;
  out.trace.resize(ladder.size());
  out.tail_fraction.resize(ladder.size());
  for (Eigen::Index i = 0; i < ladder.size(); ++i) {
    const double t = ladder(i);
    auto g = [&](double lam) { return std::pow(1.0 + t * lam * lam, -0.5 * N); };
    long double data = 0;
    for (Eigen::Index j = 0; j < S.mu.size(); ++j) {
      const double lam = std::abs(S.mu(j));
      if (lam < hi) data += weights(j) * g(lam) * rho(lam);
    }
    double tail = 0;
    for (Eigen::Index q = 0; q < gm.nodes.size(); ++q) {
      const double lam = gm.nodes(q);
      tail += gm.weights(q) * g(lam) * (1.0 - rho(lam)) * density(lam);
    }
    for (Eigen::Index q = 0; q < gu.nodes.size(); ++q) {
      const double u = gu.nodes(q), lam = hi / u;
      tail += gu.weights(q) * g(lam) * density(lam) * hi / (u * u);
    }
    const double total = static_cast<double>(data) + tail;
    out.trace(i) = total;
    out.tail_fraction(i) = std::abs(tail) / std::max(std::abs(total), 1e-300);
    if (out.tail_fraction(i) > max_tail_fraction)
      throw NumericalError("resolvent tail fraction " + std::to_string(out.tail_fraction(i)) +
                           " at t = " + std::to_string(t) + " exceeds " +
                           std::to_string(max_tail_fraction));
  }
  RVec w(ladder.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::pow(ladder(i), -terms[0].power);
  if (ladder.size() < static_cast<Eigen::Index>(terms.size()))
    throw InvalidArgument("resolvent ladder shorter than the model");
  out.fit = weighted_fit(ladder, out.trace, terms, w);
  return out;
}

// ---------------------------------------------------------- local counting

double tr_l0_theoretical(int d, int r) {
  return r * std::pow(4.0 * kPi, -0.5 * d) / std::tgamma(0.5 * d);
}

Mat l1_theoretical(const DiracOperatorSpec& D, const RVec& x) {
  return h1_density(D, x) / std::tgamma(0.5 * D.dim());
}

CountingResult local_counting_fit(const SpectralData& S, const RVec& x, const Mollifier& chi,
                                  double lo, double hi, int points, int K) {
  return counting_fit(S, local_trace(S, x), chi, lo, hi, points, K);
}

}  // namespace spectra_forge
