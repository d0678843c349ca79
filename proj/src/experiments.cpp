#include "spectra_forge/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>

#include "spectra_forge/asymptotics.hpp"
#include "spectra_forge/frames.hpp"
#include "spectra_forge/quadrature.hpp"
#include "spectra_forge/residue.hpp"
#include "spectra_forge/util.hpp"

namespace spectra_forge {

Check check_rel(const std::string& name, double value, double expected, double tol) {
  return {name, value, expected, tol, "rel", std::abs(value - expected) <= tol * std::abs(expected)};
}

Check check_abs(const std::string& name, double value, double expected, double tol) {
  return {name, value, expected, tol, "abs", std::abs(value - expected) <= tol};
}

Check check_max(const std::string& name, double value, double bound) {
  return {name, value, 0.0, bound, "max", value <= bound};
}

bool ExperimentResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

CsvTable ExperimentResult::check_table() const {
  CsvTable t("checks", {"check", "value", "expected", "tolerance", "kind", "status"});
  for (const auto& c : checks)
    t.add_row({c.name, c.value, c.expected, c.tolerance, c.kind, std::string(c.pass ? "PASS" : "FAIL")});
  return t;
}

SpectralData compute_spectrum(const DiracOperatorSpec& D, const SpectralConfig& spec) {
  if (spec.method == "exact") {
    // Rough record count r * Vol(B_lambda), refused before any allocation.
    const int d = D.dim();
    const double ball = std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(spec.lambda + 1.0, d);
    if (ball * D.rank() > 5e7)
      throw ResourceError("about " + std::to_string(static_cast<long long>(ball * D.rank())) +
                          " eigenpairs requested; lower spectral.lambda");
    return exact_modes(D, spec.lambda);
  }
  if (spec.method == "galerkin") return galerkin(D, spec.K, spec.size_limit);
  if (spec.method == "sector") return sector_galerkin(D, spec.K, spec.lambda, spec.size_limit);
  throw InvalidArgument("unknown spectral method '" + spec.method + "'");
}

namespace {

struct Context {
  const ExperimentConfig& cfg;
  ExperimentResult& result;

  double tol(const std::string& key, double fallback) const {
    auto it = cfg.params.tolerance.find(key);
    return it == cfg.params.tolerance.end() ? fallback : it->second;
  }
  void add(Check c) { result.checks.push_back(std::move(c)); }
};

RVec ladder_or_default(const ExperimentConfig& cfg, double cutoff) {
  if (cfg.params.ladder.empty()) return default_heat_ladder(cutoff);
  return Eigen::Map<const RVec>(cfg.params.ladder.data(), static_cast<Eigen::Index>(cfg.params.ladder.size()));
}

// (2 pi)^d Tr F_0.
double integrated_trace(const TrigMatrixField& F) {
  return std::pow(2.0 * kPi, F.dim()) * F.coefficient(Frequency(F.dim(), 0)).trace().real();
}

// Sum of operator norms of the compatible potential's coefficients; 1 if zero.
double potential_scale(const DiracOperatorSpec& D) {
  const auto cf = compatible_form(D);
  double s = 0;
  for (const auto& [n, c] : cf.potential.coefficients()) s += c.operatorNorm();
  return s > 0 ? s : 1.0;
}

// |A_1| of the model operator with potential potential_scale * Id, the
// natural size against which a vanishing A_1 is measured.
double a1_scale(const DiracOperatorSpec& D, const TrigMatrixField& F) {
  const auto model = make_dirac(D.mod, potential_scale(D) * identity(D.rank()));
  return std::abs(a1_theoretical_dirac(model, F));
}

void add_fit_rows(CsvTable& t, const std::string& label, const AsymptoticFit& fit) {
  for (std::size_t i = 0; i < fit.terms.size(); ++i)
    t.add_row({label, fit.terms[i].power, static_cast<long long>(fit.terms[i].log_power),
               fit.coefficients(static_cast<Eigen::Index>(i)),
               fit.uncertainty(static_cast<Eigen::Index>(i)), fit.condition, fit.window_lo,
               fit.window_hi, static_cast<long long>(fit.samples)});
}

CsvTable fit_table() {
  return CsvTable("fit", {"series", "power", "log_power", "coefficient", "uncertainty", "condition",
                          "window_lo", "window_hi", "samples"});
}

std::vector<RVec> local_points(const ExperimentConfig& cfg) {
  std::vector<RVec> out;
  for (const auto& p : cfg.params.x)
    out.push_back(Eigen::Map<const RVec>(p.data(), static_cast<Eigen::Index>(p.size())));
  if (out.empty()) out.push_back(RVec::Zero(cfg.d));
  return out;
}

// ------------------------------------------------------------------ experiments

void clifford_check(Context& ctx) {
  std::vector<int> dims;
  if (ctx.cfg.params.clifford_d > 0)
    dims.push_back(ctx.cfg.params.clifford_d);
  else
    for (int d = 1; d <= 6; ++d) dims.push_back(d);
  CsvTable rel("relations", {"d", "rank", "relation_residual"});
  CsvTable hat_t("hat", {"d", "grade", "basis_size", "eigenvalue", "residual"});
  for (int d : dims) {
    const auto mod = build_gamma(d);
    const double rr = clifford_relation_residual(mod);
    rel.add_row({static_cast<long long>(d), static_cast<long long>(mod.r), rr});
    ctx.add(check_max("relations d=" + std::to_string(d), rr, ctx.tol("relations", 0.0)));
    for (int k = 0; k <= d; ++k) {
      const auto basis = grade_basis(mod, k);
      const int ev = hat_eigenvalue(d, k);
      double worst = 0;
      for (const auto& e : basis) worst = std::max(worst, (hat(mod, e) - static_cast<double>(ev) * e).norm());
      hat_t.add_row({static_cast<long long>(d), static_cast<long long>(k),
                     static_cast<long long>(basis.size()), static_cast<long long>(ev), worst});
      ctx.add(check_max("hat d=" + std::to_string(d) + " grade " + std::to_string(k), worst,
                        ctx.tol("hat", 0.0)));
    }
  }
  ctx.result.tables.push_back(std::move(rel));
  ctx.result.tables.push_back(std::move(hat_t));
}

void bw_check(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto mod = build_gamma(cfg.d);
  auto rng = module_rng(cfg.seed, "experiments.bw-check");
  CsvTable t("residuals", {"trial", "bw_residual", "adjoint_residual"});
  double worst_bw = 0, worst_adj = 0;
  for (int i = 0; i < cfg.params.trials; ++i) {
    const auto D = random_self_adjoint_dirac(mod, 2, 0.5, rng);
    const std::uint64_t s = rng();
    const double bw = bw_residual(D, 3, s);
    const double adj = adjoint_residual(D, 3, s);
    worst_bw = std::max(worst_bw, bw);
    worst_adj = std::max(worst_adj, adj);
    t.add_row({static_cast<long long>(i), bw, adj});
  }
  ctx.add(check_max("bw residual", worst_bw, ctx.tol("bw", 1e-9)));
  ctx.add(check_max("adjoint residual", worst_adj, ctx.tol("adjoint", 1e-10)));
  ctx.result.tables.push_back(std::move(t));
}

void counting(Context& ctx, const DiracOperatorSpec& D, const SpectralData& S, const TrigMatrixField& F) {
  const auto& P = ctx.cfg.params;
  const Mollifier chi(P.mollifier);
  const RVec w = matrix_elements(S, F);
  const auto cf = counting_fit(S, w, chi, P.window_lo, P.window_hi, P.points, P.fit_terms);
  CsvTable series("series", {"mu", "smoothed_counting"});
  for (Eigen::Index i = 0; i < cf.grid.size(); ++i) series.add_row({cf.grid(i), cf.series(i)});
  CsvTable fits = fit_table();
  add_fit_rows(fits, "counting", cf.fit);

  const double a0 = a0_theoretical(D, F);
  ctx.add(check_rel("A0 counting vs closed form", cf.fit.coefficients(0), a0, ctx.tol("a0", 0.01)));
  if (P.fit_terms >= 2 && D.has_constant_gammas()) {
    const double a1 = a1_theoretical_dirac(D, F);
    const double scale = std::max(std::abs(a1), a1_scale(D, F));
    ctx.add(check_abs("A1 counting vs closed form", cf.fit.coefficients(1), a1, ctx.tol("a1", 0.02) * scale));
  }
  if (cf.fit.ill_conditioned) ctx.add(check_max("counting fit condition", cf.fit.condition, kIllConditioned));

  if (S.has_vectors()) {
    CsvTable local("local", {"point", "x", "coefficient", "fitted", "uncertainty", "theory"});
    const auto pts = local_points(ctx.cfg);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const RVec& x = pts[i];
      std::string xs;
      for (Eigen::Index a = 0; a < x.size(); ++a) xs += (a ? " " : "") + format_double(x(a));
      const auto lc = local_counting_fit(S, x, chi, P.window_lo, P.window_hi, P.points, P.fit_terms);
      const double l0 = tr_l0_theoretical(D.dim(), D.rank());
      local.add_row({static_cast<long long>(i), xs, std::string("L0"), lc.fit.coefficients(0),
                     lc.fit.uncertainty(0), l0});
      ctx.add(check_rel("Tr L0 at point " + std::to_string(i), lc.fit.coefficients(0), l0, ctx.tol("l0", 0.02)));
      if (P.fit_terms >= 2 && D.has_constant_gammas()) {
        const double l1 = l1_theoretical(D, x).trace().real();
        const auto model = make_dirac(D.mod, potential_scale(D) * identity(D.rank()));
        const double scale = std::max(std::abs(l1), std::abs(l1_theoretical(model, x).trace().real()));
        local.add_row({static_cast<long long>(i), xs, std::string("L1"), lc.fit.coefficients(1),
                       lc.fit.uncertainty(1), l1});
        ctx.add(check_abs("Tr L1 at point " + std::to_string(i), lc.fit.coefficients(1), l1,
                          ctx.tol("l1", 0.03) * scale));
      }
    }
    ctx.result.tables.push_back(std::move(local));
  }
  ctx.result.tables.push_back(std::move(series));
  ctx.result.tables.push_back(std::move(fits));
}

void heat(Context& ctx, const DiracOperatorSpec& D, const SpectralData& S, const TrigMatrixField& F) {
  const RVec w = matrix_elements(S, F);
  const RVec t = ladder_or_default(ctx.cfg, S.cutoff);
  const auto terms = heat_terms(D.dim());
  const auto plain = heat_fit(S, w, HeatMode::plain, t, terms);
  const auto sgn = heat_fit(S, w, HeatMode::signed_trace, t, terms);
  CsvTable ladder("ladder", {"t", "plain", "signed"});
  for (Eigen::Index i = 0; i < t.size(); ++i)
    ladder.add_row({t(i), heat_trace(S, w, HeatMode::plain, t(i)), heat_trace(S, w, HeatMode::signed_trace, t(i))});
  CsvTable fits = fit_table();
  add_fit_rows(fits, "plain", plain.fit);
  add_fit_rows(fits, "signed", sgn.fit);
  const double d = D.dim();
  const double h0 = std::pow(4.0 * kPi, -0.5 * d) * integrated_trace(F);
  ctx.add(check_rel("plain heat leading", plain.fit.coefficient(-0.5 * d), h0, ctx.tol("heat_plain", 1e-3)));
  const double h1 = std::tgamma(0.5 * d) * a1_theoretical_dirac(D, F);
  const double scale = std::max(std::abs(h1), std::tgamma(0.5 * d) * a1_scale(D, F));
  ctx.add(check_abs("signed heat leading", sgn.fit.coefficient(-0.5 * d), h1, ctx.tol("heat_signed", 1e-3) * scale));
  ctx.result.tables.push_back(std::move(ladder));
  ctx.result.tables.push_back(std::move(fits));
}

void zeta(Context& ctx, const DiracOperatorSpec& D, const SpectralData& S, const TrigMatrixField& F) {
  const auto& P = ctx.cfg.params;
  const int d = D.dim();
  const RVec w = matrix_elements(S, F);
  const RVec t = ladder_or_default(ctx.cfg, S.cutoff);
  const double lead = 2.0 * std::pow(4.0 * kPi, -0.5 * d) * integrated_trace(F) / std::tgamma(0.5 * d);
  const auto top = zeta_residue(S, w, d, P.fit_terms, t);
  const auto sub = zeta_residue(S, w, d - 1, P.fit_terms, t);
  CsvTable tab("values", {"quantity", "s", "value"});
  tab.add_row({std::string("residue"), static_cast<double>(d), top.residue});
  tab.add_row({std::string("residue"), static_cast<double>(d - 1), sub.residue});
  ctx.add(check_rel("Res s=d", top.residue, lead, ctx.tol("zeta_top", 5e-3)));
  ctx.add(check_abs("Res s=d-1", sub.residue, 0.0, ctx.tol("zeta_sub", 5e-3) * std::abs(lead)));
  for (double s : P.s) tab.add_row({std::string("continued"), s, zeta_continued(S, w, s, P.fit_terms, t)});

  const SpectralData Z = with_extra_zero_modes(S, 3);
  const RVec wz = matrix_elements(Z, F);
  const double again = zeta_residue(Z, wz, d, P.fit_terms, t).residue;
  ctx.add(check_abs("zero modes leave Res s=d unchanged", again, top.residue, 1e-12 * std::abs(top.residue)));
  ctx.result.tables.push_back(std::move(tab));
}

void eta(Context& ctx, const DiracOperatorSpec& D, const SpectralData& S, const TrigMatrixField& F) {
  const auto& P = ctx.cfg.params;
  const int d = D.dim();
  const RVec w = matrix_elements(S, F);
  const RVec t = ladder_or_default(ctx.cfg, S.cutoff);
  const auto e = eta_residue(S, w, d - 1, P.fit_terms, t);
  const double expected = 2.0 * a1_theoretical_dirac(D, F);
  const double scale = std::max(std::abs(expected), 2.0 * a1_scale(D, F));
  ctx.add(check_abs("eta Res s=d-1", e.residue, expected, ctx.tol("eta", 0.02) * scale));
  const SpectralData Z = with_extra_zero_modes(S, 3);
  const double again = eta_residue(Z, matrix_elements(Z, F), d - 1, P.fit_terms, t).residue;
  ctx.add(check_abs("zero modes leave eta residue unchanged", again, e.residue, 1e-12 * scale));
  CsvTable tab("values", {"quantity", "s", "value"});
  tab.add_row({std::string("eta_residue"), static_cast<double>(d - 1), e.residue});
  CsvTable fits = fit_table();
  add_fit_rows(fits, "sign", e.heat.fit);
  ctx.result.tables.push_back(std::move(tab));
  ctx.result.tables.push_back(std::move(fits));
}

void resolvent(Context& ctx, const DiracOperatorSpec& D, const SpectralData& S, const TrigMatrixField& F) {
  const auto& P = ctx.cfg.params;
  const int d = D.dim();
  const RVec w = matrix_elements(S, F);
  const double a0 = 2.0 * std::pow(4.0 * kPi, -0.5 * d) * integrated_trace(F) / std::tgamma(0.5 * d);
  CsvTable trace("trace", {"N", "t", "trace", "tail_fraction"});
  CsvTable fits = fit_table();
  std::vector<double> b0;
  for (double N : P.N) {
    const auto rf = resolvent_fit(S, w, N, {}, {}, ctx.tol("tail_fraction", 0.25));
    for (Eigen::Index i = 0; i < rf.t.size(); ++i) trace.add_row({N, rf.t(i), rf.trace(i), rf.tail_fraction(i)});
    add_fit_rows(fits, "N=" + format_double(N), rf.fit);
    b0.push_back(rf.fit.coefficients(0));
    ctx.add(check_rel("B0 N=" + format_double(N), b0.back(), resolvent_factor(d, 0, 0, N) * a0,
                      ctx.tol("b0", 5e-3)));
  }
  for (std::size_t i = 1; i < b0.size(); ++i)
    ctx.add(check_rel("B0 ratio N=" + format_double(P.N[i]) + "/" + format_double(P.N[0]), b0[i] / b0[0],
                      resolvent_factor(d, 0, 0, P.N[i]) / resolvent_factor(d, 0, 0, P.N[0]),
                      ctx.tol("b0_ratio", 0.01)));
  ctx.result.tables.push_back(std::move(trace));
  ctx.result.tables.push_back(std::move(fits));
}

void residue(Context& ctx, const DiracOperatorSpec& D, const TrigMatrixField& F) {
  if (!D.constant_flag() || !F.is_constant())
    throw InvalidArgument("residue experiment needs constant coefficients and constant F");
  const Mat F0 = F.coefficient(Frequency(D.dim(), 0));
  CsvTable tab("values", {"quantity", "k", "value", "method", "residual"});
  for (int k : ctx.cfg.params.k) {
    const auto rep = ak_via_residue(D, F0, k, ctx.cfg.params.sphere_order);
    tab.add_row({std::string("A_k"), static_cast<long long>(k), rep.value, std::string("residue"),
                 std::max(rep.fit_residual, rep.rescale_error)});
    if (k == 0) {
      const double e = a0_theoretical(D, F);
      tab.add_row({std::string("A_k"), 0LL, e, std::string("closed_form"), 0.0});
      ctx.add(check_rel("A0 residue vs closed form", rep.value, e, ctx.tol("a0_residue", 5e-3)));
    } else {
      const double e = a1_theoretical_dirac(D, F);
      tab.add_row({std::string("A_k"), 1LL, e, std::string("closed_form"), 0.0});
      const double scale = std::max(std::abs(e), a1_scale(D, F));
      ctx.add(check_abs("A1 residue vs closed form", rep.value, e, ctx.tol("a1_residue", 0.02) * scale));
    }
  }
  ctx.result.tables.push_back(std::move(tab));
}

RVec random_point(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  RVec x(d);
  for (int a = 0; a < d; ++a) x(a) = u(rng);
  return x;
}

RVec random_direction(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  RVec xi(d);
  for (int a = 0; a < d; ++a) xi(a) = n(rng);
  return xi / xi.norm();
}

void sub_symbol(Context& ctx, const DiracOperatorSpec& D, const TrigMatrixField& F) {
  auto rng = module_rng(ctx.cfg.seed, "experiments.sub-symbol");
  const auto sd = dirac_symbol(D);
  const auto fs = endomorphism_symbol(D.rank(), [F](const RVec& x) { return F(x); });
  CsvTable tab("points", {"sample", "sub_dirac_error", "sub_laplacian_error", "product_rule_DD",
                          "product_rule_FD"});
  double e1 = 0, e2 = 0, p1 = 0, p2 = 0;
  const ClassicalSymbol sl = D.has_constant_gammas() ? laplacian_symbol(D) : ClassicalSymbol{};
  for (int i = 0; i < ctx.cfg.params.samples; ++i) {
    const RVec x = random_point(D.dim(), rng);
    const RVec xi = random_direction(D.dim(), rng);
    const double a = (sub_symbol_dirac(D, x) - sub_symbol_generic(sd, x, xi)).norm();
    double b = 0;
    if (D.has_constant_gammas()) b = (sub_symbol_laplacian(D, x, xi) - sub_symbol_generic(sl, x, xi)).norm();
    const double c = sub_product_residual(sd, sd, x, xi);
    const double e = sub_product_residual(fs, sd, x, xi);
    e1 = std::max(e1, a);
    e2 = std::max(e2, b);
    p1 = std::max(p1, c);
    p2 = std::max(p2, e);
    tab.add_row({static_cast<long long>(i), a, b, c, e});
  }
  ctx.add(check_max("Sub(D) closed form vs finite difference", e1, ctx.tol("sub", 1e-6)));
  if (D.has_constant_gammas())
    ctx.add(check_max("Sub(D^2) closed form vs finite difference", e2, ctx.tol("sub", 1e-6)));
  ctx.add(check_max("product rule D D", p1, ctx.tol("product", 1e-7)));
  ctx.add(check_max("product rule F D", p2, ctx.tol("product", 1e-7)));
  ctx.result.tables.push_back(std::move(tab));
}

double scalar_deviation(const Mat& m) {
  return (m - (m.trace() / static_cast<double>(m.rows())) * identity(static_cast<int>(m.rows()))).norm();
}

void massless(Context& ctx, const DiracOperatorSpec& D) {
  const auto& cfg = ctx.cfg;
  if (!cfg.op.frame) throw InvalidArgument("massless experiment needs an operator.frame block");
  const auto& fs = *cfg.op.frame;
  AngleFunction th;
  th.coordinate = fs.coordinate - 1;
  th.cos_coeffs = fs.cos_coeffs;
  th.sin_coeffs = fs.sin_coeffs;
  const FrameField frame = rotation_frame(cfg.d, fs.a - 1, fs.b - 1, th);
  const auto sd = dirac_symbol(D);
  // Cyclic planes (2,3)/1, (3,1)/2, (1,2)/3 give the -theta'/2 profile.
  const bool cyclic = cfg.d == 3 && fs.a % 3 + 1 == fs.b && fs.b % 3 + 1 == fs.coordinate;
  CsvTable tab("profile", {"x", "sub_generic", "sub_dirac", "christoffel_formula", "minus_half_theta_prime",
                           "scalar_deviation"});
  double err_generic = 0, err_dirac = 0, err_theta = 0, nonscalar = 0;
  const int n = std::max(2, cfg.params.samples);
  auto rng = module_rng(cfg.seed, "experiments.massless");
  for (int i = 0; i < n; ++i) {
    RVec x = random_point(cfg.d, rng);
    x(th.coordinate) = 2.0 * kPi * i / n;
    const RVec xi = random_direction(cfg.d, rng);
    const Mat sg = sub_symbol_generic(sd, x, xi);
    const Mat sdir = sub_symbol_dirac(D, x);
    const double formula = cfg.d == 3 ? sub_massless_theoretical(frame, x) : 0.0;
    const double half = -0.5 * th.derivative(x);
    const Mat ref = (sg.trace() / static_cast<double>(D.rank())) * identity(D.rank());
    nonscalar = std::max(nonscalar, scalar_deviation(sdir));
    if (cfg.d == 3 && cfg.op.psi.empty()) {
      err_generic = std::max(err_generic, (sg - formula * identity(D.rank())).norm());
      err_dirac = std::max(err_dirac, (sdir - formula * identity(D.rank())).norm());
      if (cyclic) err_theta = std::max(err_theta, std::abs(formula - half));
    }
    tab.add_row({x(th.coordinate), ref(0, 0).real(), (sdir.trace() / static_cast<double>(D.rank())).real(),
                 formula, half, scalar_deviation(sdir)});
  }
  if (cfg.op.psi.empty()) {
    if (cfg.d == 3) {
      ctx.add(check_max("Sub(D) finite difference vs Christoffel formula", err_generic, ctx.tol("sub", 1e-6)));
      ctx.add(check_max("Sub(D) closed form vs Christoffel formula", err_dirac, ctx.tol("sub", 1e-6)));
      if (cyclic) ctx.add(check_max("Christoffel formula vs -theta'/2", err_theta, ctx.tol("sub", 1e-6)));
    }
    ctx.add(check_max("Sub(D) scalar", nonscalar, ctx.tol("sub", 1e-6)));
  } else {
    ctx.add({"Sub(D) deviates from scalar", nonscalar, 0.0, ctx.tol("nonscalar", 1e-6), "min",
             nonscalar > ctx.tol("nonscalar", 1e-6)});
  }
  ctx.result.tables.push_back(std::move(tab));

  if (cfg.spectral.method == "exact") return;
  const SpectralData S = compute_spectrum(D, cfg.spectral);
  const RVec w = RVec::Ones(static_cast<Eigen::Index>(S.size()));
  CsvTable spec("spectrum", {"index", "mu", "flat_mu"});
  if (cfg.op.psi.empty()) {
    // The rotated frame is gauge equivalent to the flat one, so the spectra agree.
    const auto flat = exact_modes(make_dirac(D.mod, Mat::Zero(D.rank(), D.rank())), S.cutoff);
    const double edge = S.cutoff - 1e-6;
    std::vector<double> a, b;
    for (Eigen::Index i = 0; i < S.mu.size(); ++i)
      if (std::abs(S.mu(i)) < edge) a.push_back(S.mu(i));
    for (Eigen::Index i = 0; i < flat.mu.size(); ++i)
      if (std::abs(flat.mu(i)) < edge) b.push_back(flat.mu(i));
    double worst = a.size() == b.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      worst = std::max(worst, std::abs(a[i] - b[i]));
      spec.add_row({static_cast<long long>(i), a[i], b[i]});
    }
    ctx.add(check_max("spectrum matches the flat operator", worst, ctx.tol("spectrum", 1e-8)));
  }
  const RVec t = ladder_or_default(cfg, S.cutoff);
  const auto terms = heat_terms(cfg.d);
  const auto plain = heat_fit(S, w, HeatMode::plain, t, terms);
  const auto sgn = heat_fit(S, w, HeatMode::signed_trace, t, terms);
  CsvTable fits = fit_table();
  add_fit_rows(fits, "plain", plain.fit);
  add_fit_rows(fits, "signed", sgn.fit);
  const double h0 = std::pow(4.0 * kPi, -0.5 * cfg.d) * std::pow(2.0 * kPi, cfg.d) * D.rank();
  // Tr L_1 integrated: Gamma(d/2) A_1(Id, D) = int Tr h1 = 0 for the massless operator.
  double h1 = 0;
  const auto tq = torus_quadrature(cfg.d, 8);
  for (Eigen::Index q = 0; q < tq.size(); ++q) h1 += tq.weights(q) * h1_density(D, tq.nodes.col(q)).trace().real();
  CsvTable h1tab("h1", {"quantity", "value"});
  h1tab.add_row({std::string("signed_heat_leading"), sgn.fit.coefficient(-0.5 * cfg.d)});
  h1tab.add_row({std::string("integrated_h1"), h1});
  if (cfg.op.psi.empty())
    ctx.add(check_abs("signed heat leading vanishes", sgn.fit.coefficient(-0.5 * cfg.d), 0.0,
                      ctx.tol("heat_signed", 1e-6) * h0));
  ctx.result.tables.push_back(std::move(spec));
  ctx.result.tables.push_back(std::move(fits));
  ctx.result.tables.push_back(std::move(h1tab));
}

struct Route {
  std::string name;
  double value;
};

void report(Context& ctx, const DiracOperatorSpec& D, const SpectralData& S, const TrigMatrixField& F) {
  const auto& P = ctx.cfg.params;
  if (!D.constant_flag() || !F.is_constant())
    throw InvalidArgument("report needs constant coefficients and constant F");
  const int d = D.dim();
  const double g = std::tgamma(0.5 * d);
  const RVec w = matrix_elements(S, F);
  const RVec t = ladder_or_default(ctx.cfg, S.cutoff);
  const Mat F0 = F.coefficient(Frequency(d, 0));
  const Mollifier bump(P.mollifier);
  const auto cf = counting_fit(S, w, bump, P.window_lo, P.window_hi, P.points, 3);
  const auto hp = heat_fit(S, w, HeatMode::plain, t, heat_terms(d));
  const auto hs = heat_fit(S, w, HeatMode::signed_trace, t, heat_terms(d));
  const auto z = zeta_residue(S, w, d, P.fit_terms, t);
  const auto e = eta_residue(S, w, d - 1, P.fit_terms, t);
  const auto r0 = ak_via_residue(D, F0, 0, P.sphere_order);
  const auto r1 = ak_via_residue(D, F0, 1, P.sphere_order);

  CsvTable tab("web", {"coefficient", "route_a", "route_b", "value_a", "value_b", "difference", "status"});
  auto web = [&](const std::string& coef, const std::vector<Route>& routes, double scale, double tol) {
    for (std::size_t i = 0; i < routes.size(); ++i)
      for (std::size_t j = i + 1; j < routes.size(); ++j) {
        const double diff = std::abs(routes[i].value - routes[j].value);
        const bool ok = diff <= tol * scale;
        tab.add_row({coef, routes[i].name, routes[j].name, routes[i].value, routes[j].value, diff,
                     std::string(ok ? "PASS" : "FAIL")});
        ctx.add({coef + ": " + routes[i].name + " vs " + routes[j].name, diff, 0.0, tol * scale, "max", ok});
      }
  };
  const std::vector<Route> a0 = {{"counting", cf.fit.coefficients(0)},
                                 {"closed_form", a0_theoretical(D, F)},
                                 {"plain_heat", hp.fit.coefficient(-0.5 * d) / g},
                                 {"zeta_residue", z.residue / 2.0},
                                 {"residue", r0.value}};
  web("A0", a0, std::abs(a0[1].value), ctx.tol("web", 0.03));
  const double a1c = a1_theoretical_dirac(D, F);
  const std::vector<Route> a1 = {{"counting", cf.fit.coefficients(1)},
                                 {"closed_form", a1c},
                                 {"signed_heat", hs.fit.coefficient(-0.5 * d) / g},
                                 {"eta_residue", e.residue / 2.0},
                                 {"residue", r1.value}};
  web("A1", a1, std::max(std::abs(a1c), a1_scale(D, F)), ctx.tol("web", 0.03));

  // A_1(F, D^2) lives on the spectrum of |D| and has the wrong parity to survive.
  CsvTable parity("parity", {"F", "A0", "A1", "A1_uncertainty"});
  {
    auto [mu, wa] = abs_spectrum(S.mu, w);
    const RVec grid = linear_grid(P.window_lo > 0 ? P.window_lo : S.cutoff / 3,
                                  P.window_hi > 0 ? P.window_hi : 2 * S.cutoff / 3, P.points);
    const RVec series = mollified_counting(mu, wa, bump, grid, S.cutoff);
    const auto fit = fit_counting(grid, series, d, 3);
    parity.add_row({std::string("config"), fit.coefficients(0), fit.coefficients(1), fit.uncertainty(1)});
    const double bound = 3.0 * fit.uncertainty(1) + ctx.tol("parity", 1e-3) * std::abs(fit.coefficients(0));
    ctx.add(check_max("parity: |A1(F, D^2)|", std::abs(fit.coefficients(1)), bound));
  }

  CsvTable moll("mollifiers", {"mollifier", "A0", "A0_uncertainty", "A1", "A1_uncertainty"});
  {
    MollifierSpec gs{MollifierKind::gaussian, 1.0, 0};
    const auto cg = counting_fit(S, w, Mollifier(gs), P.window_lo, P.window_hi, P.points, 3);
    moll.add_row({to_string(P.mollifier.kind), cf.fit.coefficients(0), cf.fit.uncertainty(0),
                  cf.fit.coefficients(1), cf.fit.uncertainty(1)});
    moll.add_row({std::string("gaussian"), cg.fit.coefficients(0), cg.fit.uncertainty(0), cg.fit.coefficients(1),
                  cg.fit.uncertainty(1)});
    for (int i = 0; i < 2; ++i) {
      const double comb = std::hypot(cf.fit.uncertainty(i), cg.fit.uncertainty(i));
      const double floor = ctx.tol("mollifier", 1e-3) * std::abs(a0[1].value);
      ctx.add(check_abs("mollifier independence A" + std::to_string(i), cg.fit.coefficients(i),
                        cf.fit.coefficients(i), 3.0 * comb + floor));
    }
  }

  {
    const SpectralData Z = with_extra_zero_modes(S, 4);
    const RVec wz = matrix_elements(Z, F);
    ctx.add(check_abs("zero modes: zeta residue", zeta_residue(Z, wz, d, P.fit_terms, t).residue, z.residue,
                      1e-12 * std::abs(z.residue)));
    ctx.add(check_abs("zero modes: eta residue", eta_residue(Z, wz, d - 1, P.fit_terms, t).residue, e.residue,
                      1e-12 * std::max(1.0, std::abs(e.residue))));
  }
  ctx.result.tables.push_back(std::move(tab));
  ctx.result.tables.push_back(std::move(parity));
  ctx.result.tables.push_back(std::move(moll));
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.experiment = cfg.experiment;
  Context ctx{cfg, result};
  const std::string& e = cfg.experiment;
  if (e == "clifford-check") {
    clifford_check(ctx);
    return result;
  }
  if (e == "bw-check") {
    bw_check(ctx);
    return result;
  }
  const DiracOperatorSpec D = build_operator(cfg);
  const TrigMatrixField F = build_field(D.mod, cfg.F, true);
  if (e == "sub-symbol") {
    sub_symbol(ctx, D, F);
  } else if (e == "massless") {
    massless(ctx, D);
  } else if (e == "residue") {
    residue(ctx, D, F);
  } else {
    const SpectralData S = compute_spectrum(D, cfg.spectral);
    if (e == "counting-fit")
      counting(ctx, D, S, F);
    else if (e == "heat-fit")
      heat(ctx, D, S, F);
    else if (e == "zeta")
      zeta(ctx, D, S, F);
    else if (e == "eta")
      eta(ctx, D, S, F);
    else if (e == "resolvent")
      resolvent(ctx, D, S, F);
    else if (e == "report")
      report(ctx, D, S, F);
    else
      throw InvalidArgument("unknown experiment '" + e + "'");
  }
  return result;
}

std::vector<std::string> write_result(const ExperimentResult& result, const ExperimentConfig& cfg,
                                      const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string hash = config_hash(cfg);
  const std::string stamp = utc_timestamp();
  std::vector<std::string> paths;
  auto emit = [&](CsvTable t) {
    t.set_meta("experiment", result.experiment);
    t.set_meta("config_hash", hash);
    t.set_meta("seed", std::to_string(cfg.seed));
    t.set_meta("generated", stamp);
    const std::string path = (std::filesystem::path(out_dir) / (result.experiment + "_" + t.name() + ".csv")).string();
    t.write(path);
    paths.push_back(path);
  };
  for (const auto& t : result.tables) emit(t);
  emit(result.check_table());
  return paths;
}

}  // namespace spectra_forge
