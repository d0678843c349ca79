#include "spectra_forge/clifford.hpp"

#include <algorithm>
#include <string>

namespace spectra_forge {

namespace {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat pauli(int which) {
  Mat s = Mat::Zero(2, 2);
  switch (which) {
    case 1:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case 2:
      s(0, 1) = -kI;
      s(1, 0) = kI;
      break;
    default:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
  }
  return s;
}

// Hermitian generators e_j with e_j e_k + e_k e_j = 2 delta_jk for an even
// number 2n of generators, size 2^n.
std::vector<Mat> even_hermitian_generators(int n) {
  std::vector<Mat> gens;
  Mat unit = Mat::Identity(1, 1);
  for (int level = 1; level <= n; ++level) {
    std::vector<Mat> next;
    for (const auto& g : gens) next.push_back(kron(g, pauli(3)));
    next.push_back(kron(unit, pauli(1)));
    next.push_back(kron(unit, pauli(2)));
    gens = std::move(next);
    unit = Mat::Identity(unit.rows() * 2, unit.cols() * 2);
  }
  return gens;
}

// (-i)^n e_1 ... e_{2n}: Hermitian, squares to Id, anticommutes with all e_j.
Mat chirality(const std::vector<Mat>& gens, int size) {
  Mat w = Mat::Identity(size, size);
  for (const auto& g : gens) w = w * g;
  const int n = static_cast<int>(gens.size()) / 2;
  return std::pow(-kI, n) * w;
}

void check_shape(const CliffordModule& mod, const Mat& psi) {
  if (psi.rows() != mod.r || psi.cols() != mod.r)
    throw ShapeMismatch("endomorphism is " + std::to_string(psi.rows()) + "x" +
                        std::to_string(psi.cols()) + ", module rank is " +
                        std::to_string(mod.r));
}

void subsets(int d, int k, int start, std::vector<int>& cur,
             std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < d; ++i) {
    cur.push_back(i);
    subsets(d, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

Mat CliffordModule::gamma(const RVec& X) const {
  if (X.size() != d) throw ShapeMismatch("vector length does not match module dimension");
  Mat out = Mat::Zero(r, r);
  for (int k = 0; k < d; ++k) out += X(k) * gammas[k];
  return out;
}

CliffordModule build_gamma(int d) {
  if (d < 1 || d > 8)
    throw UnsupportedDimension("Clifford modules are built for 1 <= d <= 8, got d = " +
                               std::to_string(d));
  const int n = d / 2;
  std::vector<Mat> herm = even_hermitian_generators(n);
  const int size = 1 << n;
  if (d % 2 == 1) herm.push_back(chirality(herm, size));

  CliffordModule mod;
  mod.d = d;
  mod.r = size;
  for (const auto& e : herm) mod.gammas.push_back(-kI * e);
  return mod;
}

double clifford_relation_residual(const CliffordModule& mod) {
  double worst = 0.0;
  for (int j = 0; j < mod.d; ++j)
    for (int k = 0; k < mod.d; ++k) {
      Mat m = mod.gammas[j] * mod.gammas[k] + mod.gammas[k] * mod.gammas[j];
      if (j == k) m += 2.0 * identity(mod.r);
      worst = std::max(worst, m.cwiseAbs().maxCoeff());
    }
  return worst;
}

Mat hat(const CliffordModule& mod, const Mat& psi) {
  check_shape(mod, psi);
  Mat out = Mat::Zero(mod.r, mod.r);
  for (const auto& g : mod.gammas) out += g * psi * g;
  return out;
}

int hat_eigenvalue(int d, int k) { return (k % 2 == 0 ? 1 : -1) * (2 * k - d); }

int max_grade(int d) { return d % 2 == 0 ? d : (d - 1) / 2; }

std::vector<Mat> grade_basis(const CliffordModule& mod, int k) {
  if (k < 0 || k > mod.d) throw InvalidArgument("grade out of range");
  std::vector<std::vector<int>> sets;
  std::vector<int> cur;
  subsets(mod.d, k, 0, cur, sets);
  std::vector<Mat> basis;
  basis.reserve(sets.size());
  for (const auto& s : sets) {
    Mat p = identity(mod.r);
    for (int i : s) p = p * mod.gammas[i];
    basis.push_back(std::move(p));
  }
  return basis;
}

GradeDecomposition grade_project(const CliffordModule& mod, const Mat& psi, double tol) {
  check_shape(mod, psi);
  GradeDecomposition out;
  const int top = max_grade(mod.d);
  Mat sum = Mat::Zero(mod.r, mod.r);
  double eig_residual = 0.0;
  for (int k = 0; k <= top; ++k) {
    Mat comp = Mat::Zero(mod.r, mod.r);
    // Grade products are unitary and trace-orthogonal: Tr(B^dag B) = r.
    for (const auto& b : grade_basis(mod, k))
      comp += ((b.adjoint() * psi).trace() / static_cast<double>(mod.r)) * b;
    Mat h = hat(mod, comp) - static_cast<double>(hat_eigenvalue(mod.d, k)) * comp;
    eig_residual = std::max(eig_residual, h.norm());
    sum += comp;
    out.components.push_back(std::move(comp));
  }
  out.residual_norm = std::max((sum - psi).norm(), eig_residual);
  if (out.residual_norm > tol * std::max(1.0, psi.norm()))
    throw NumericalError("grade decomposition residual " +
                         std::to_string(out.residual_norm) +
                         " exceeds tolerance; is the module irreducible?");
  return out;
}

Mat l_map(const CliffordModule& mod, const Mat& psi, const RVec& X, int sign) {
  check_shape(mod, psi);
  if (sign != 1 && sign != -1) throw InvalidArgument("l_map sign must be +1 or -1");
  const Mat g = mod.gamma(X);
  return (0.5 * sign) * (g * psi + psi * g);
}

double commutant_report(const CliffordModule& mod, const Mat& psi) {
  double worst = 0.0;
  for (int i = 0; i < mod.d; ++i) {
    const Mat L = l_map(mod, psi, RVec::Unit(mod.d, i), -1);
    for (const auto& g : mod.gammas) worst = std::max(worst, commutator(L, g).norm());
  }
  return worst;
}

bool is_generalized_potential(const CliffordModule& mod, const Mat& psi, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  const Mat diff = hat(mod, psi) - static_cast<double>(mod.d - 2) * psi;
  return diff.norm() <= tol * std::max(1.0, psi.norm());
}

}  // namespace spectra_forge
