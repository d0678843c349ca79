#include "spectra_forge/symbols.hpp"

#include <algorithm>
#include <cmath>

namespace spectra_forge {

namespace {

// Fourth-order central difference of g along a direction, g(t) sampled at t0 + j h.
template <class G>
Mat central4(G&& g, double h) {
  return (g(-2.0 * h) - 8.0 * g(-h) + 8.0 * g(h) - g(2.0 * h)) / (12.0 * h);
}

}  // namespace

Mat diff_x(const SymbolFunction& f, const RVec& x, const RVec& xi, int k,
           const FiniteDifference& fd) {
  return central4(
      [&](double t) {
        RVec y = x;
        y(k) += t;
        return f(y, xi);
      },
      fd.h);
}

Mat diff_xi(const SymbolFunction& f, const RVec& x, const RVec& xi, int k,
            const FiniteDifference& fd) {
  const double h = fd.h * std::max(1.0, xi.norm());
  return central4(
      [&](double t) {
        RVec e = xi;
        e(k) += t;
        return f(x, e);
      },
      h);
}

Mat mixed_trace(const SymbolFunction& f, const RVec& x, const RVec& xi,
                const FiniteDifference& fd) {
  Mat out;
  for (int k = 0; k < x.size(); ++k) {
    SymbolFunction dxi = [&f, k, fd](const RVec& y, const RVec& e) {
      return diff_xi(f, y, e, k, fd);
    };
    Mat term = diff_x(dxi, x, xi, k, fd);
    out = k == 0 ? term : Mat(out + term);
  }
  return out;
}

Mat sub_symbol_generic(const ClassicalSymbol& A, const RVec& x, const RVec& xi,
                       const FiniteDifference& fd) {
  if (A.depth() < 2) throw InvalidArgument("subprincipal symbol needs symbol depth >= 2");
  return A.components[1](x, xi) + (0.5 * kI) * mixed_trace(A.components[0], x, xi, fd);
}

Mat poisson_bracket(const SymbolFunction& a, const SymbolFunction& b, const RVec& x,
                    const RVec& xi, const FiniteDifference& fd) {
  Mat out;
  for (int k = 0; k < x.size(); ++k) {
    Mat term = diff_xi(a, x, xi, k, fd) * diff_x(b, x, xi, k, fd) -
               diff_x(a, x, xi, k, fd) * diff_xi(b, x, xi, k, fd);
    out = k == 0 ? term : Mat(out + term);
  }
  return out;
}

ClassicalSymbol compose(const ClassicalSymbol& A, const ClassicalSymbol& B,
                        const FiniteDifference& fd) {
  if (A.depth() < 2 || B.depth() < 2) throw InvalidArgument("composition needs depth >= 2");
  if (A.rank != B.rank) throw ShapeMismatch("composed symbols have different ranks");
  ClassicalSymbol out;
  out.order = A.order + B.order;
  out.rank = A.rank;
  auto a0 = A.components[0], a1 = A.components[1];
  auto b0 = B.components[0], b1 = B.components[1];
  out.components.push_back([a0, b0](const RVec& x, const RVec& xi) -> Mat {
    return a0(x, xi) * b0(x, xi);
  });
  out.components.push_back([a0, a1, b0, b1, fd](const RVec& x, const RVec& xi) -> Mat {
    Mat s = a0(x, xi) * b1(x, xi) + a1(x, xi) * b0(x, xi);
    for (int k = 0; k < x.size(); ++k)
      s -= kI * (diff_xi(a0, x, xi, k, fd) * diff_x(b0, x, xi, k, fd));
    return s;
  });
  return out;
}

double sub_product_residual(const ClassicalSymbol& A, const ClassicalSymbol& B,
                            const RVec& x, const RVec& xi, const FiniteDifference& fd) {
  const ClassicalSymbol AB = compose(A, B, fd);
  const Mat lhs = sub_symbol_generic(AB, x, xi, fd);
  const Mat rhs = sub_symbol_generic(A, x, xi, fd) * B.principal(x, xi) +
                  A.principal(x, xi) * sub_symbol_generic(B, x, xi, fd) +
                  poisson_bracket(A.components[0], B.components[0], x, xi, fd) / (2.0 * kI);
  return (lhs - rhs).norm();
}

double homogeneity_defect(const ClassicalSymbol& A, const RVec& x, const RVec& xi) {
  double worst = 0.0;
  for (int j = 0; j < A.depth(); ++j) {
    const Mat base = A.components[j](x, xi);
    for (double lambda : {2.0, 3.0}) {
      const Mat scaled = A.components[j](x, lambda * xi);
      const Mat expect = std::pow(lambda, A.order - j) * base;
      const double scale = std::max(expect.norm(), 1e-300);
      worst = std::max(worst, (scaled - expect).norm() / scale);
    }
  }
  return worst;
}

ClassicalSymbol endomorphism_symbol(int rank, std::function<Mat(const RVec&)> F) {
  ClassicalSymbol s;
  s.order = 0.0;
  s.rank = rank;
  s.components.push_back([F](const RVec& x, const RVec&) { return F(x); });
  s.components.push_back(
      [rank](const RVec&, const RVec&) -> Mat { return Mat::Zero(rank, rank); });
  return s;
}

}  // namespace spectra_forge
