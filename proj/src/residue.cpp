#include "spectra_forge/residue.hpp"

#include <cmath>
#include <string>

namespace spectra_forge {

Mat HomogeneousExpansion::eval(std::size_t node, double lambda) const {
  const auto& s = components.at(node);
  Mat out = Mat::Zero(s[0].rows(), s[0].cols());
  for (int j = 0; j <= J; ++j) out += std::pow(lambda, m - j) * s[static_cast<std::size_t>(j)];
  return out;
}

HomogeneousExpansion homogeneous_expand(const std::function<Mat(const RVec&)>& f, double m, int J,
                                        const SphereQuadrature& quad, const RVec& ladder,
                                        double tol) {
  const Eigen::Index L = ladder.size();
  if (J < 0 || L < J + 1) throw InvalidArgument("ladder needs at least J + 1 samples");
  if ((ladder.array() <= 0).any()) throw InvalidArgument("ladder must be positive");
  // Rows scaled by lambda^{-m}: column j is lambda^{-j}.
  RMat V(L, J + 1);
  for (Eigen::Index l = 0; l < L; ++l)
    for (int j = 0; j <= J; ++j) V(l, j) = std::pow(ladder(l), -j);
  const Eigen::ColPivHouseholderQR<RMat> qr(V);
  const Eigen::MatrixXcd Vc = V.cast<cplx>();

  HomogeneousExpansion out;
  out.m = m;
  out.J = J;
  out.ladder = ladder;
  out.components.resize(static_cast<std::size_t>(quad.size()));
  for (Eigen::Index node = 0; node < quad.size(); ++node) {
    const RVec omega = quad.nodes.col(node);
    Mat first = f(ladder(0) * omega);
    const Eigen::Index r = first.rows(), c = first.cols();
    Mat data(L, r * c);
    for (Eigen::Index l = 0; l < L; ++l) {
      const Mat v = l == 0 ? first : f(ladder(l) * omega);
      data.row(l) = Eigen::Map<const Eigen::RowVectorXcd>(v.data(), r * c) * std::pow(ladder(l), -m);
    }
    Mat coef(J + 1, r * c);
    for (Eigen::Index col = 0; col < r * c; ++col) {
      const RVec re = qr.solve(RVec(data.col(col).real()));
      const RVec im = qr.solve(RVec(data.col(col).imag()));
      coef.col(col) = re.cast<cplx>() + kI * im.cast<cplx>();
    }
    const double scale = std::max(data.cwiseAbs().maxCoeff(), 1e-300);
    out.residual = std::max(out.residual, (Vc * coef - data).cwiseAbs().maxCoeff() / scale);
    auto& comps = out.components[static_cast<std::size_t>(node)];
    for (int j = 0; j <= J; ++j) {
      Eigen::RowVectorXcd row = coef.row(j);
      comps.push_back(Eigen::Map<const Mat>(row.data(), r, c));
    }
  }
  if (out.residual > tol)
    throw NumericalError("homogeneous expansion residual " + std::to_string(out.residual) +
                         " exceeds " + std::to_string(tol));
  return out;
}

double res_total(const SymbolFunction& symbol_minus_d, const SphereQuadrature& quad,
                 const TorusQuadrature& torus) {
  const int d = quad.d;
  if (torus.d != d) throw ShapeMismatch("sphere and torus dimensions differ");
  // Homogeneity spot check at the first few node pairs.
  const Eigen::Index checks = std::min<Eigen::Index>(3, std::min(quad.size(), torus.size()));
  for (Eigen::Index i = 0; i < checks; ++i) {
    const RVec x = torus.nodes.col(i), xi = quad.nodes.col(i);
    const Mat a = symbol_minus_d(x, xi);
    const Mat b = symbol_minus_d(x, 2.0 * xi) * std::pow(2.0, d);
    if ((a - b).norm() > 1e-8 * std::max(1.0, a.norm()))
      throw NumericalError("residue integrand is not homogeneous of degree -d");
  }
  double total = 0;
  for (Eigen::Index i = 0; i < torus.size(); ++i) {
    const RVec x = torus.nodes.col(i);
    for (Eigen::Index j = 0; j < quad.size(); ++j)
      total += torus.weights(i) * quad.weights(j) *
               symbol_minus_d(x, quad.nodes.col(j)).trace().real();
  }
  return total / std::pow(2.0 * kPi, d);
}

double res_via_sub(const ClassicalSymbol& A, const SphereQuadrature& quad,
                   const TorusQuadrature& torus, const FiniteDifference& fd) {
  const int d = quad.d;
  if (std::abs(A.order - (1.0 - d)) > 1e-12)
    throw InvalidArgument("res_via_sub needs a symbol of order 1 - d");
  if (A.depth() < 2) throw InvalidArgument("symbol depth must be at least 2");
  double total = 0;
  for (Eigen::Index i = 0; i < torus.size(); ++i) {
    const RVec x = torus.nodes.col(i);
    for (Eigen::Index j = 0; j < quad.size(); ++j)
      total += torus.weights(i) * quad.weights(j) *
               sub_symbol_generic(A, x, quad.nodes.col(j), fd).trace().real();
  }
  return total / std::pow(2.0 * kPi, d);
}

double res_pair(const ClassicalSymbol& A, const ClassicalSymbol& B, const SphereQuadrature& quad,
                const TorusQuadrature& torus, const FiniteDifference& fd) {
  const int d = quad.d;
  if (std::abs(A.order + B.order - (1.0 - d)) > 1e-12)
    throw InvalidArgument("res_pair needs orders summing to 1 - d");
  if (A.depth() < 2 || B.depth() < 2) throw InvalidArgument("symbol depth must be at least 2");
  double total = 0;
  for (Eigen::Index i = 0; i < torus.size(); ++i) {
    const RVec x = torus.nodes.col(i);
    for (Eigen::Index j = 0; j < quad.size(); ++j) {
      const RVec xi = quad.nodes.col(j);
      const Mat m = sub_symbol_generic(A, x, xi, fd) * B.principal(x, xi) +
                    A.principal(x, xi) * sub_symbol_generic(B, x, xi, fd);
      total += torus.weights(i) * quad.weights(j) * m.trace().real();
    }
  }
  return total / std::pow(2.0 * kPi, d);
}

namespace {

Mat dirac_matrix(const CliffordModule& mod, const Mat& Z, const RVec& xi) {
  Mat h = Z;
  for (int a = 0; a < mod.d; ++a) h += (kI * xi(a)) * mod.gammas[a];
  return h;
}

Mat constant_zeroth_order(const DiracOperatorSpec& D) {
  if (!D.has_constant_gammas() || !D.constant_flag())
    throw InvalidArgument("operator must have constant coefficients");
  return zeroth_order_field(D).coefficient(Frequency(D.dim(), 0));
}

}  // namespace

ResidueReport ak_via_residue(const DiracOperatorSpec& D, const Mat& F, int k, int sphere_order,
                             RVec ladder) {
  if (k != 0 && k != 1) throw InvalidArgument("ak_via_residue implements k in {0, 1}");
  const int d = D.dim(), r = D.rank();
  if (F.rows() != r || F.cols() != r) throw ShapeMismatch("endomorphism shape");
  const Mat Z = constant_zeroth_order(D);
  if ((Z - Z.adjoint()).norm() > 1e-10 * std::max(1.0, Z.norm()))
    throw NumericalError("d(xi) is not Hermitian");
  const double shift = Z.operatorNorm();
  const double scale = std::max(1.0, shift);
  if (ladder.size() == 0) ladder = (RVec(5) << 4, 6, 8, 12, 16).finished() * scale;
  if (ladder.minCoeff() <= shift)
    throw InvalidArgument("ladder lies inside the spectral-shift radius " + std::to_string(shift));
  const double p = k - d - 1.0;
  auto g = [&](const RVec& xi) -> Mat {
    Eigen::SelfAdjointEigenSolver<Mat> es(dirac_matrix(D.mod, Z, xi));
    Mat acc = Mat::Zero(r, r);
    for (int i = 0; i < r; ++i) {
      const double mu = es.eigenvalues()(i);
      if (mu > 0) {
        const Vec v = es.eigenvectors().col(i);
        acc += std::pow(mu, p + 1.0) * (v * v.adjoint());
      }
    }
    return F * acc;
  };
  const SphereQuadrature quad = sphere_quadrature(d, sphere_order);
  const double top = k - d;
  const HomogeneousExpansion ex = homogeneous_expand(g, top, k + 2, quad, ladder);
  ResidueReport rep;
  rep.fit_residual = ex.residual;
  const double probe = 1.5 * ladder.maxCoeff();
  double total = 0;
  for (Eigen::Index j = 0; j < quad.size(); ++j) {
    const auto node = static_cast<std::size_t>(j);
    total += quad.weights(j) * ex.component(node, k).trace().real();
    const Mat direct = g(probe * quad.nodes.col(j));
    rep.rescale_error = std::max(rep.rescale_error, (ex.eval(node, probe) - direct).norm() /
                                                        std::max(direct.norm(), 1e-300));
  }
  // The x-integral is the torus volume, which cancels the (2 pi)^{-d} prefactor.
  rep.value = total;
  return rep;
}

double sub_power_residual(const DiracOperatorSpec& D, double q, const RVec& xi,
                          const RVec& ladder, int J) {
  const int d = D.dim(), r = D.rank();
  const Mat Z = constant_zeroth_order(D);
  const double n = xi.norm();
  if (!(n > 0)) throw InvalidArgument("xi must be nonzero");
  SphereQuadrature one;
  one.d = d;
  one.nodes = xi / n;
  one.weights = RVec::Ones(1);
  auto power = [&](const RVec& eta) -> Mat {
    const Mat h = dirac_matrix(D.mod, Z, eta);
    Eigen::SelfAdjointEigenSolver<Mat> es(h * h);
    const RVec ev = es.eigenvalues().array().pow(q);
    return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  };
  const HomogeneousExpansion ex = homogeneous_expand(power, 2.0 * q, J, one, ladder);
  const RVec omega = xi / n;
  const Mat sub_pq = std::pow(n, 2.0 * q - 1.0) * ex.component(0, 1);
  Mat sub_p = Mat::Zero(r, r);
  for (int a = 0; a < d; ++a) {
    const Mat ga = D.mod.gammas[a];
    sub_p += (kI * xi(a)) * (ga * Z + Z * ga);
  }
  const Mat expect = q * std::pow(n, 2.0 * (q - 1.0)) * sub_p;
  return (sub_pq - expect).norm() / std::max(sub_pq.norm(), 1e-300);
}

}  // namespace spectra_forge
