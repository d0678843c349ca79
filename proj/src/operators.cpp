#include "spectra_forge/operators.hpp"

#include <algorithm>
#include <cmath>

#include "spectra_forge/util.hpp"

namespace spectra_forge {

bool DiracOperatorSpec::constant_flag() const {
  if (!psi.is_constant()) return false;
  for (const auto& f : b)
    if (!f.is_constant()) return false;
  for (const auto& f : gamma_fields)
    if (!f.is_constant()) return false;
  return true;
}

std::vector<Mat> DiracOperatorSpec::gammas_at(const RVec& x) const {
  if (gamma_fields.empty()) return mod.gammas;
  std::vector<Mat> out;
  out.reserve(gamma_fields.size());
  for (const auto& g : gamma_fields) out.push_back(g(x));
  return out;
}

std::vector<TrigMatrixField> DiracOperatorSpec::gamma_field_list() const {
  if (!gamma_fields.empty()) return gamma_fields;
  std::vector<TrigMatrixField> out;
  for (const auto& g : mod.gammas) out.push_back(TrigMatrixField::constant(mod.d, g));
  return out;
}

DiracOperatorSpec make_dirac(const CliffordModule& mod, std::vector<TrigMatrixField> b,
                             TrigMatrixField psi) {
  DiracOperatorSpec D;
  D.mod = mod;
  if (b.empty())
    for (int j = 0; j < mod.d; ++j) b.push_back(TrigMatrixField::zero(mod.d, mod.r));
  if (static_cast<int>(b.size()) != mod.d)
    throw ShapeMismatch("need one connection coefficient per coordinate");
  for (const auto& f : b)
    if (f.rank() != mod.r || f.dim() != mod.d) throw ShapeMismatch("connection field shape");
  if (psi.rank() == 0 && psi.dim() == 0) psi = TrigMatrixField::zero(mod.d, mod.r);
  if (psi.rank() != mod.r || psi.dim() != mod.d) throw ShapeMismatch("potential field shape");
  D.b = std::move(b);
  D.psi = std::move(psi);
  return D;
}

DiracOperatorSpec make_dirac(const CliffordModule& mod, const Mat& psi_constant) {
  return make_dirac(mod, {}, TrigMatrixField::constant(mod.d, psi_constant));
}

TrigMatrixField zeroth_order_field(const DiracOperatorSpec& D) {
  TrigMatrixField z = D.psi;
  const auto gammas = D.gamma_field_list();
  for (int a = 0; a < D.dim(); ++a) z += gammas[a] * D.b[a];
  return z.pruned();
}

TrigVectorField apply(const DiracOperatorSpec& D, const TrigVectorField& s) {
  if (s.rank() != D.rank() || s.dim() != D.dim()) throw ShapeMismatch("section rank mismatch");
  TrigVectorField out = zeroth_order_field(D) * s;
  const auto gammas = D.gamma_field_list();
  for (int a = 0; a < D.dim(); ++a) out += gammas[a] * s.derivative(a);
  return out;
}

double adjoint_residual(const DiracOperatorSpec& D, int trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  auto rng = module_rng(seed, "operators.adjoint_residual");
  double worst = 0.0;
  auto check = [&](const TrigVectorField& u, const TrigVectorField& v) {
    const cplx lhs = apply(D, u).inner(v);
    const cplx rhs = u.inner(apply(D, v));
    worst = std::max(worst, std::abs(lhs - rhs) / (u.norm() * v.norm()));
  };
  for (int t = 0; t < trials; ++t) {
    const auto u = random_section(D.dim(), D.rank(), 2, rng);
    const auto v = random_section(D.dim(), D.rank(), 2, rng);
    check(u, v);
    check(u, u);
  }
  return worst;
}

CompatibleForm compatible_form(const DiracOperatorSpec& D) {
  if (!D.has_constant_gammas()) {
    if (!D.compatible)
      throw InvalidArgument("x-dependent gammas require a connection flagged compatible");
    return {D.b, D.psi};
  }
  const int d = D.dim(), r = D.rank();
  CompatibleForm out;
  out.potential = D.psi;
  for (int a = 0; a < d; ++a) {
    TrigMatrixField scalar(d, r);
    for (const auto& [n, c] : D.b[a].coefficients())
      scalar.add_term(n, (c.trace() / static_cast<double>(r)) * identity(r));
    out.potential += D.mod.gammas[a] * (D.b[a] - scalar);
    out.connection.push_back(scalar.pruned());
  }
  out.potential = out.potential.pruned();
  return out;
}

BWData bw_decompose(const DiracOperatorSpec& D) {
  if (!D.has_constant_gammas())
    throw InvalidArgument("Bochner-Weitzenboeck decomposition implemented for constant gammas");
  const int d = D.dim(), r = D.rank();
  const CompatibleForm cf = compatible_form(D);
  const auto& g = D.mod.gammas;
  const TrigMatrixField& psi = cf.potential;

  std::vector<TrigMatrixField> L;
  for (int j = 0; j < d; ++j) L.push_back(0.5 * (g[j] * psi + psi * g[j]));

  BWData out;
  for (int j = 0; j < d; ++j) out.connection.push_back((cf.connection[j] - L[j]).pruned());

  TrigMatrixField V = psi * psi;
  for (int j = 0; j < d; ++j) V += L[j] * L[j];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const auto& bi = cf.connection[i];
      const auto& bj = cf.connection[j];
      TrigMatrixField R = bj.derivative(i) - bi.derivative(j) + bi * bj - bj * bi;
      V += 0.5 * (g[i] * g[j] * R);
    }
  for (int i = 0; i < d; ++i) {
    const auto& bi = cf.connection[i];
    TrigMatrixField cov = psi.derivative(i) + bi * psi - psi * bi;
    V += 0.5 * (g[i] * cov - cov * g[i]);
  }
  out.V = V.pruned();
  (void)r;
  return out;
}

TrigVectorField connection_laplacian(const std::vector<TrigMatrixField>& connection,
                                     const TrigVectorField& s) {
  TrigVectorField out(s.dim(), s.rank());
  for (std::size_t j = 0; j < connection.size(); ++j) {
    const int jj = static_cast<int>(j);
    TrigVectorField first = s.derivative(jj) + connection[j] * s;
    TrigVectorField second = first.derivative(jj) + connection[j] * first;
    out -= second;
  }
  return out;
}

double bw_residual(const DiracOperatorSpec& D, int trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  const BWData bw = bw_decompose(D);
  auto rng = module_rng(seed, "operators.bw_residual");
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto s = random_section(D.dim(), D.rank(), 2, rng);
    const auto lhs = apply(D, apply(D, s));
    const auto rhs = connection_laplacian(bw.connection, s) + bw.V * s;
    worst = std::max(worst, (lhs - rhs).norm() / s.norm());
  }
  return worst;
}

Mat h1_density(const DiracOperatorSpec& D, const RVec& x) {
  const CompatibleForm cf = compatible_form(D);
  const Mat psi = cf.potential(x);
  const auto g = D.gammas_at(x);
  Mat hat_psi = Mat::Zero(D.rank(), D.rank());
  for (const auto& ga : g) hat_psi += ga * psi * ga;
  const int d = D.dim();
  return std::pow(4.0 * kPi, -0.5 * d) * 0.5 * (hat_psi - static_cast<double>(d - 2) * psi);
}

Mat sub_symbol_dirac(const DiracOperatorSpec& D, const RVec& x) {
  const CompatibleForm cf = compatible_form(D);
  const auto g = D.gammas_at(x);
  Mat out = cf.potential(x);
  for (int j = 0; j < D.dim(); ++j) {
    const Mat bj = cf.connection[j](x);
    out += 0.5 * (g[j] * bj + bj * g[j]);
  }
  return out;
}

Mat sub_symbol_laplacian(const DiracOperatorSpec& D, const RVec& x, const RVec& xi) {
  const CompatibleForm cf = compatible_form(D);
  const auto g = D.gammas_at(x);
  const Mat psi = cf.potential(x);
  Mat out = Mat::Zero(D.rank(), D.rank());
  for (int k = 0; k < D.dim(); ++k)
    out += xi(k) * (g[k] * psi + psi * g[k] - 2.0 * cf.connection[k](x));
  return kI * out;
}

ClassicalSymbol dirac_symbol(const DiracOperatorSpec& D) {
  ClassicalSymbol s;
  s.order = 1.0;
  s.rank = D.rank();
  const auto gammas = D.gamma_field_list();
  const TrigMatrixField z = zeroth_order_field(D);
  s.components.push_back([gammas](const RVec& x, const RVec& xi) -> Mat {
    Mat out = Mat::Zero(gammas[0].rank(), gammas[0].rank());
    for (std::size_t a = 0; a < gammas.size(); ++a)
      out += (kI * xi(static_cast<Eigen::Index>(a))) * gammas[a](x);
    return out;
  });
  s.components.push_back([z](const RVec& x, const RVec&) -> Mat { return z(x); });
  return s;
}

ClassicalSymbol laplacian_symbol(const DiracOperatorSpec& D) {
  ClassicalSymbol s;
  s.order = 2.0;
  s.rank = D.rank();
  const auto gammas = D.gamma_field_list();
  const TrigMatrixField z = zeroth_order_field(D);
  const int d = D.dim();
  // gamma^a d_a gamma^c, one field per c.
  std::vector<TrigMatrixField> drift;
  for (int c = 0; c < d; ++c) {
    TrigMatrixField f = TrigMatrixField::zero(d, D.rank());
    for (int a = 0; a < d; ++a) f += gammas[a] * gammas[c].derivative(a);
    drift.push_back(f.pruned());
  }
  s.components.push_back([gammas](const RVec& x, const RVec& xi) -> Mat {
    Mat g = Mat::Zero(gammas[0].rank(), gammas[0].rank());
    for (std::size_t a = 0; a < gammas.size(); ++a)
      g += xi(static_cast<Eigen::Index>(a)) * gammas[a](x);
    return -(g * g);
  });
  s.components.push_back([gammas, z, drift](const RVec& x, const RVec& xi) -> Mat {
    const Mat zx = z(x);
    Mat out = Mat::Zero(zx.rows(), zx.cols());
    for (std::size_t c = 0; c < gammas.size(); ++c) {
      const Mat gc = gammas[c](x);
      out += xi(static_cast<Eigen::Index>(c)) * (drift[c](x) + gc * zx + zx * gc);
    }
    return kI * out;
  });
  return s;
}

DiracOperatorSpec random_self_adjoint_dirac(const CliffordModule& mod, int K, double scale,
                                            std::mt19937_64& rng) {
  const int d = mod.d, r = mod.r;
  std::vector<TrigMatrixField> b;
  TrigMatrixField psi = random_matrix_field(d, r, K, scale, true, rng);
  for (int j = 0; j < d; ++j) {
    TrigMatrixField bj = kI * random_matrix_field(d, r, K, scale, true, rng);
    psi -= 0.5 * (mod.gammas[j] * bj - bj * mod.gammas[j]);
    b.push_back(std::move(bj));
  }
  return make_dirac(mod, std::move(b), psi.pruned());
}

}  // namespace spectra_forge
