#pragma once

#include <functional>
#include <vector>

#include "spectra_forge/core.hpp"

namespace spectra_forge {

/// Matrix-valued function of (x, xi).
using SymbolFunction = std::function<Mat(const RVec& x, const RVec& xi)>;

/// Classical symbol of order m: components[j] is homogeneous of degree m - j
/// in xi (for xi != 0).
struct ClassicalSymbol {
  double order = 0.0;
  int rank = 0;
  std::vector<SymbolFunction> components;

  int depth() const { return static_cast<int>(components.size()); }
  Mat principal(const RVec& x, const RVec& xi) const { return components.at(0)(x, xi); }
};

/// Central-difference settings for symbol derivatives. The stencil is
/// fourth order, so the truncation error is O(h^4) and the roundoff floor
/// is about eps / h^2.
struct FiniteDifference {
  double h = 1e-3;
};

/// df/dx^k or df/dxi_k at (x, xi).
Mat diff_x(const SymbolFunction& f, const RVec& x, const RVec& xi, int k,
           const FiniteDifference& fd = {});
Mat diff_xi(const SymbolFunction& f, const RVec& x, const RVec& xi, int k,
            const FiniteDifference& fd = {});
/// sum_k d^2 f / dx^k dxi_k.
Mat mixed_trace(const SymbolFunction& f, const RVec& x, const RVec& xi,
                const FiniteDifference& fd = {});

/// Sub(A) = sigma^(1) + (i/2) sum_k d^2 sigma^(0) / dx^k dxi_k (flat measure).
Mat sub_symbol_generic(const ClassicalSymbol& A, const RVec& x, const RVec& xi,
                       const FiniteDifference& fd = {});

/// {a, b} = sum_k (d_xi a d_x b - d_x a d_xi b).
Mat poisson_bracket(const SymbolFunction& a, const SymbolFunction& b, const RVec& x,
                    const RVec& xi, const FiniteDifference& fd = {});

/// Depth-2 symbol of AB:
/// sigma^(0) = sigma_A sigma_B,
/// sigma^(1) = sigma_A sigma_B^(1) + sigma_A^(1) sigma_B - i d_xi sigma_A . d_x sigma_B.
ClassicalSymbol compose(const ClassicalSymbol& A, const ClassicalSymbol& B,
                        const FiniteDifference& fd = {});

/// || Sub(AB) - Sub(A) sigma_B - sigma_A Sub(B) - {sigma_A, sigma_B} / (2i) ||.
double sub_product_residual(const ClassicalSymbol& A, const ClassicalSymbol& B,
                            const RVec& x, const RVec& xi, const FiniteDifference& fd = {});

/// max over components and lambda in {2, 3} of the relative homogeneity defect.
double homogeneity_defect(const ClassicalSymbol& A, const RVec& x, const RVec& xi);

/// Order-0 symbol of a matrix field F(x): sigma^(0) = F, sigma^(1) = 0.
ClassicalSymbol endomorphism_symbol(int rank, std::function<Mat(const RVec&)> F);

}  // namespace spectra_forge
