#include "spectra_forge/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <thread>

#include "spectra_forge/util.hpp"

namespace spectra_forge {

Frequency SpectralData::frequency(std::size_t j) const {
  Frequency k(d);
  for (int a = 0; a < d; ++a) k[a] = freq(a, static_cast<Eigen::Index>(j));
  return k;
}

std::vector<std::pair<std::size_t, std::size_t>> SpectralData::groups() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = size();
  std::size_t start = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    if (j == n || mu(j) - mu(j - 1) >= group_tol * (1.0 + std::abs(mu(j)))) {
      out.emplace_back(start, j);
      start = j;
    }
  }
  return out;
}

namespace {

struct Record {
  double mu;
  Frequency k;
  Vec v;
};

void sort_records(std::vector<Record>& recs) {
  std::stable_sort(recs.begin(), recs.end(),
                   [](const Record& a, const Record& b) { return a.mu < b.mu; });
}

SpectralData pack(int d, int r, std::vector<Record>& recs, Eigen::Index vec_rows) {
  SpectralData S;
  S.d = d;
  S.r = r;
  const auto n = static_cast<Eigen::Index>(recs.size());
  S.mu.resize(n);
  S.freq.resize(d, n);
  S.vectors.resize(vec_rows, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    auto& rec = recs[static_cast<std::size_t>(j)];
    S.mu(j) = rec.mu;
    for (int a = 0; a < d; ++a) S.freq(a, j) = rec.k[a];
    S.vectors.col(j) = rec.v;
  }
  return S;
}

// Frequencies k with |k| <= R, lexicographic, for a fixed first component.
void slice_frequencies(int d, int first, int R, double R2, std::vector<Frequency>& out) {
  Frequency k(d, -R);
  k[0] = first;
  while (true) {
    double n2 = 0;
    for (int v : k) n2 += static_cast<double>(v) * v;
    if (n2 <= R2) out.push_back(k);
    int a = d - 1;
    while (a >= 1 && k[a] == R) k[a--] = -R;
    if (a < 1) break;
    ++k[a];
  }
}

}  // namespace

SpectralData exact_modes(const DiracOperatorSpec& D, double lambda) {
  if (!D.has_constant_gammas() || !D.constant_flag())
    throw InvalidArgument("exact_modes requires a constant-coefficient operator");
  if (!(lambda > 0)) throw InvalidArgument("cutoff must be positive");
  const int d = D.dim(), r = D.rank();
  const Mat Z = zeroth_order_field(D).coefficient(Frequency(d, 0));
  const double herm = (Z - Z.adjoint()).norm();
  if (herm > 1e-10 * std::max(1.0, Z.norm()))
    throw NumericalError("d(k) is not Hermitian (||Z - Z^dag|| = " + std::to_string(herm) + ")");
  const double bound = lambda + Z.operatorNorm();
  const int R = static_cast<int>(std::floor(bound));
  const double R2 = bound * bound;
  const auto& g = D.mod.gammas;

  const int nslices = 2 * R + 1;
  const int nthreads = std::max(1, std::min(thread_count(), nslices));
  std::vector<std::vector<Record>> per_slice(static_cast<std::size_t>(nslices));
  auto work = [&](int t) {
    std::vector<Frequency> ks;
    Eigen::SelfAdjointEigenSolver<Mat> es;
    for (int s = t; s < nslices; s += nthreads) {
      ks.clear();
      if (d == 1) {
        ks.push_back({s - R});
      } else {
        slice_frequencies(d, s - R, R, R2, ks);
      }
      auto& out = per_slice[static_cast<std::size_t>(s)];
      for (const auto& k : ks) {
        Mat H = Z;
        for (int a = 0; a < d; ++a)
          if (k[a] != 0) H += (kI * static_cast<double>(k[a])) * g[a];
        es.compute(H);
        for (int i = 0; i < r; ++i) {
          const double m = es.eigenvalues()(i);
          if (std::abs(m) <= lambda) out.push_back({m, k, es.eigenvectors().col(i)});
        }
      }
    }
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  std::vector<Record> recs;
  for (auto& sl : per_slice)
    for (auto& rec : sl) recs.push_back(std::move(rec));
  sort_records(recs);
  SpectralData S = pack(d, r, recs, r);
  S.exact = true;
  S.cutoff = lambda;
  S.trust_cutoff = lambda;
  return S;
}

namespace {

Mat galerkin_matrix_shifted(const DiracOperatorSpec& D, const std::vector<Frequency>& basis,
                            const Frequency& shift) {
  const int d = D.dim(), r = D.rank();
  const auto n = static_cast<Eigen::Index>(basis.size());
  const TrigMatrixField Z = zeroth_order_field(D);
  const auto gammas = D.gamma_field_list();
  Mat H = Mat::Zero(n * r, n * r);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q) {
      const Frequency diff = basis[p] - basis[q];
      Mat block = Z.coefficient(diff);
      for (int a = 0; a < d; ++a) {
        const int ka = basis[q][a] + shift[a];
        if (ka != 0) block += (kI * static_cast<double>(ka)) * gammas[a].coefficient(diff);
      }
      H.block(p * r, q * r, r, r) = block;
    }
  return H;
}

}  // namespace

Mat galerkin_matrix(const DiracOperatorSpec& D, const std::vector<Frequency>& basis) {
  return galerkin_matrix_shifted(D, basis, Frequency(D.dim(), 0));
}

SpectralData galerkin(const DiracOperatorSpec& D, int K, int size_limit) {
  if (K < 0) throw InvalidArgument("basis radius must be non-negative");
  const int d = D.dim(), r = D.rank();
  const double n_basis = std::pow(2.0 * K + 1.0, d) * r;
  if (n_basis > size_limit)
    throw ResourceError("Galerkin matrix of size " + std::to_string(static_cast<long>(n_basis)) +
                        " exceeds the dense limit " + std::to_string(size_limit));
  const auto basis = frequency_box(d, K);
  const Mat H = galerkin_matrix(D, basis);
  const double asym = (H - H.adjoint()).norm() / std::max(1.0, H.norm());
  if (asym > 1e-8)
    throw NumericalError("Galerkin matrix is not Hermitian (relative residual " +
                         std::to_string(asym) + ")");
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  std::vector<Record> recs;
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    const Vec v = es.eigenvectors().col(i);
    Eigen::Index best = 0;
    double best_w = -1;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const double w = v.segment(static_cast<Eigen::Index>(b) * r, r).squaredNorm();
      if (w > best_w + 1e-12) {
        best_w = w;
        best = static_cast<Eigen::Index>(b);
      }
    }
    recs.push_back({es.eigenvalues()(i), basis[static_cast<std::size_t>(best)], v});
  }
  sort_records(recs);
  SpectralData S = pack(d, r, recs, H.rows());
  S.exact = false;
  S.basis = basis;
  S.offset = Eigen::MatrixXi::Zero(d, S.mu.size());
  S.trust_cutoff = 0.5 * K;
  S.cutoff = S.mu.size() ? S.mu.cwiseAbs().maxCoeff() : 0.0;
  return S;
}

SpectralData sector_galerkin(const DiracOperatorSpec& D, int K, double lambda, int size_limit) {
  if (K < 0 || !(lambda > 0)) throw InvalidArgument("sector Galerkin needs K >= 0, lambda > 0");
  const int d = D.dim(), r = D.rank();
  const TrigMatrixField Z = zeroth_order_field(D);
  const auto gammas = D.gamma_field_list();
  std::vector<bool> active(static_cast<std::size_t>(d), false);
  auto mark = [&](const TrigMatrixField& f) {
    for (const auto& [n, c] : f.coefficients())
      for (int a = 0; a < d; ++a)
        if (n[a] != 0) active[static_cast<std::size_t>(a)] = true;
  };
  mark(Z);
  for (const auto& g : gammas) mark(g);
  std::vector<int> act, pas;
  for (int a = 0; a < d; ++a) (active[static_cast<std::size_t>(a)] ? act : pas).push_back(a);
  const double n_basis = std::pow(2.0 * K + 1.0, static_cast<double>(act.size())) * r;
  if (n_basis > size_limit)
    throw ResourceError("sector matrix of size " + std::to_string(static_cast<long>(n_basis)) +
                        " exceeds the dense limit " + std::to_string(size_limit));
  const double keep = std::min(lambda, 0.5 * K);

  // Active-axis box embedded in Z^d.
  std::vector<Frequency> basis;
  for (const auto& f : frequency_box(static_cast<int>(act.size()), K)) {
    Frequency k(d, 0);
    for (std::size_t i = 0; i < act.size(); ++i) k[act[i]] = f[i];
    basis.push_back(k);
  }
  if (act.empty()) basis.assign(1, Frequency(d, 0));
  // Passive momenta: |p| <= keep + sup ||Z|| bounds every eigenvalue inside the window.
  double zsup = 0;
  for (const auto& [n, c] : Z.coefficients()) zsup += c.operatorNorm();
  const double R = keep + zsup;
  const int Ri = static_cast<int>(std::floor(R));
  std::vector<Frequency> shifts;
  if (pas.empty()) {
    shifts.push_back(Frequency(d, 0));
  } else {
    for (const auto& f : frequency_box(static_cast<int>(pas.size()), Ri)) {
      double n2 = 0;
      for (int v : f) n2 += static_cast<double>(v) * v;
      if (n2 > R * R) continue;
      Frequency k(d, 0);
      for (std::size_t i = 0; i < pas.size(); ++i) k[pas[i]] = f[i];
      shifts.push_back(k);
    }
  }
  std::vector<Record> recs;
  std::vector<Frequency> rec_shift;
  Eigen::SelfAdjointEigenSolver<Mat> es;
  // H(shift) is affine in the shift: base + sum_a shift_a G_a.
  const Mat base = galerkin_matrix_shifted(D, basis, Frequency(d, 0));
  std::vector<Mat> G;
  for (int a : pas) G.push_back(galerkin_matrix_shifted(D, basis, unit_frequency(d, a)) - base);
  Mat H;
  for (const auto& shift : shifts) {
    H = base;
    for (std::size_t i = 0; i < pas.size(); ++i)
      if (shift[pas[i]] != 0) H += static_cast<double>(shift[pas[i]]) * G[i];
    const double asym = (H - H.adjoint()).norm() / std::max(1.0, H.norm());
    if (asym > 1e-8)
      throw NumericalError("Galerkin matrix is not Hermitian (relative residual " +
                           std::to_string(asym) + ")");
    es.compute(H);
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
      const double m = es.eigenvalues()(i);
      if (std::abs(m) > keep) continue;
      const Vec v = es.eigenvectors().col(i);
      Eigen::Index best = 0;
      double best_w = -1;
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const double w = v.segment(static_cast<Eigen::Index>(b) * r, r).squaredNorm();
        if (w > best_w + 1e-12) {
          best_w = w;
          best = static_cast<Eigen::Index>(b);
        }
      }
      recs.push_back({m, basis[static_cast<std::size_t>(best)] + shift, v});
      rec_shift.push_back(shift);
    }
  }
  // Sort records and their shifts together.
  std::vector<std::size_t> order(recs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return recs[a].mu < recs[b].mu; });
  std::vector<Record> sorted;
  sorted.reserve(recs.size());
  for (auto i : order) sorted.push_back(std::move(recs[i]));
  SpectralData S = pack(d, r, sorted, static_cast<Eigen::Index>(basis.size()) * r);
  S.exact = false;
  S.basis = basis;
  S.offset.resize(d, S.mu.size());
  for (std::size_t j = 0; j < order.size(); ++j)
    for (int a = 0; a < d; ++a)
      S.offset(a, static_cast<Eigen::Index>(j)) = rec_shift[order[j]][a];
  S.cutoff = keep;
  S.trust_cutoff = keep;
  return S;
}

RVec matrix_elements(const SpectralData& S, const TrigMatrixField& F) {
  if (F.rank() != S.r || F.dim() != S.d) throw ShapeMismatch("endomorphism rank mismatch");
  if (!S.has_vectors()) throw InvalidArgument("spectral data carries no eigenvectors");
  const auto n = S.mu.size();
  RVec w(n);
  if (S.exact) {
    const Mat c0 = F.coefficient(Frequency(S.d, 0));
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto v = S.vectors.col(j);
      w(j) = (v.adjoint() * c0 * v)(0, 0).real();
    }
    return w;
  }
  const auto nb = static_cast<Eigen::Index>(S.basis.size());
  Mat M(nb * S.r, nb * S.r);
  for (Eigen::Index p = 0; p < nb; ++p)
    for (Eigen::Index q = 0; q < nb; ++q)
      M.block(p * S.r, q * S.r, S.r, S.r) = F.coefficient(S.basis[p] - S.basis[q]);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto v = S.vectors.col(j);
    w(j) = (v.adjoint() * M * v)(0, 0).real();
  }
  return w;
}

GroupedValues group_sums(const SpectralData& S, const RVec& values) {
  if (values.size() != S.mu.size()) throw ShapeMismatch("one value per record expected");
  GroupedValues g;
  const auto grp = S.groups();
  g.mu.resize(static_cast<Eigen::Index>(grp.size()));
  g.value.resize(static_cast<Eigen::Index>(grp.size()));
  for (std::size_t i = 0; i < grp.size(); ++i) {
    const auto [a, b] = grp[i];
    double s = 0, m = 0;
    for (std::size_t j = a; j < b; ++j) {
      s += values(j);
      m += S.mu(j);
    }
    g.mu(i) = m / static_cast<double>(b - a);
    g.value(i) = s;
    g.multiplicity.push_back(static_cast<int>(b - a));
  }
  return g;
}

namespace {

Vec section_value(const SpectralData& S, std::size_t j, const RVec& x) {
  const double norm = std::pow(2.0 * kPi, -0.5 * S.d);
  const auto col = static_cast<Eigen::Index>(j);
  if (S.exact) {
    double phase = 0;
    for (int a = 0; a < S.d; ++a) phase += S.freq(a, col) * x(a);
    return (norm * std::exp(kI * phase)) * S.vectors.col(col);
  }
  Vec out = Vec::Zero(S.r);
  for (std::size_t b = 0; b < S.basis.size(); ++b) {
    double phase = 0;
    for (int a = 0; a < S.d; ++a) phase += (S.basis[b][a] + S.offset(a, col)) * x(a);
    out += std::exp(kI * phase) * S.vectors.col(col).segment(static_cast<Eigen::Index>(b) * S.r, S.r);
  }
  return norm * out;
}

}  // namespace

std::vector<Mat> local_density(const SpectralData& S, const RVec& x) {
  if (!S.has_vectors()) throw InvalidArgument("spectral data carries no eigenvectors");
  std::vector<Mat> out;
  out.reserve(S.size());
  for (std::size_t j = 0; j < S.size(); ++j) {
    const Vec p = section_value(S, j, x);
    out.push_back(p * p.adjoint());
  }
  return out;
}

RVec local_trace(const SpectralData& S, const RVec& x) {
  if (!S.has_vectors()) throw InvalidArgument("spectral data carries no eigenvectors");
  RVec out(S.mu.size());
  for (std::size_t j = 0; j < S.size(); ++j) out(j) = section_value(S, j, x).squaredNorm();
  return out;
}

double smoothed_trace(const SpectralData& S, const RVec& weights,
                      const std::function<double(double)>& g) {
  if (weights.size() != S.mu.size()) throw ShapeMismatch("one weight per record expected");
  long double s = 0;
  for (Eigen::Index j = 0; j < S.mu.size(); ++j) s += weights(j) * g(S.mu(j));
  return static_cast<double>(s);
}

std::pair<double, double> parseval(const SpectralData& S, const TrigVectorField& s) {
  const double vol = std::pow(2.0 * kPi, S.d);
  const double vol_half = std::sqrt(vol);
  double total = 0;
  for (Eigen::Index j = 0; j < S.mu.size(); ++j) {
    cplx ip = 0;
    if (S.exact) {
      Frequency k(S.d);
      for (int a = 0; a < S.d; ++a) k[a] = S.freq(a, j);
      ip = S.vectors.col(j).dot(s.coefficient(k));
    } else {
      for (std::size_t b = 0; b < S.basis.size(); ++b) {
        Frequency k = S.basis[b];
        for (int a = 0; a < S.d; ++a) k[a] += S.offset(a, j);
        ip += S.vectors.col(j).segment(static_cast<Eigen::Index>(b) * S.r, S.r).dot(
            s.coefficient(k));
      }
    }
    // phi_j = e^{ik.x} v / vol^{1/2}, so <phi_j, s> = vol^{1/2} v^dag s_k.
    total += std::norm(vol_half * ip);
  }
  const double n = s.norm();
  return {total, n * n};
}

SpectralData with_extra_zero_modes(const SpectralData& S, int count) {
  SpectralData out = S;
  const auto n = S.mu.size();
  out.mu.conservativeResize(n + count);
  out.freq.conservativeResize(S.d, n + count);
  out.vectors.conservativeResize(S.vectors.rows(), n + count);
  if (!S.exact) out.offset.conservativeResize(S.d, n + count);
  for (Eigen::Index j = n; j < n + count; ++j) {
    out.mu(j) = 0.0;
    out.freq.col(j).setZero();
    out.vectors.col(j).setZero();
    out.vectors(0, j) = 1.0;
    if (!S.exact) out.offset.col(j).setZero();
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n + count));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return out.mu(a) < out.mu(b); });
  SpectralData sorted = out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto src = order[i];
    const auto dst = static_cast<Eigen::Index>(i);
    sorted.mu(dst) = out.mu(src);
    sorted.freq.col(dst) = out.freq.col(src);
    sorted.vectors.col(dst) = out.vectors.col(src);
    if (!S.exact) sorted.offset.col(dst) = out.offset.col(src);
  }
  return sorted;
}

}  // namespace spectra_forge
