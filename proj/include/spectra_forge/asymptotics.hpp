#pragma once

#include <vector>

#include "spectra_forge/mollifier.hpp"
#include "spectra_forge/operators.hpp"
#include "spectra_forge/spectral.hpp"
#include "spectra_forge/symbols.hpp"

namespace spectra_forge {

/// Model term x^power (log x)^log_power.
struct FitTerm {
  double power = 0.0;
  int log_power = 0;
};

std::vector<FitTerm> power_terms(const std::vector<double>& powers);

/// Weighted least-squares fit of sum_i c_i term_i(x).
struct AsymptoticFit {
  std::vector<FitTerm> terms;
  RVec coefficients;
  RVec uncertainty;  // one standard deviation from the residual covariance
  double window_lo = 0.0;
  double window_hi = 0.0;
  int samples = 0;
  double condition = 0.0;  // of the column-equilibrated weighted design
  bool ill_conditioned = false;
  double residual = 0.0;   // max |model - data| * weight over the samples

  /// Index of the term x^power (log x)^log_power; throws if absent.
  int index_of(double power, int log_power = 0) const;
  double coefficient(double power, int log_power = 0) const;
  double uncertainty_of(double power, int log_power = 0) const;
  double eval(double x) const;
};

inline constexpr double kIllConditioned = 1e8;

AsymptoticFit weighted_fit(const RVec& x, const RVec& y, const std::vector<FitTerm>& terms,
                           const RVec& weights);

// ---------------------------------------------------------------- counting

/// Equally spaced grid with n points on [lo, hi].
RVec linear_grid(double lo, double hi, int n);

/// (chi * N'_w)(mu) on the grid, by direct summation over sorted
/// eigenvalues. Throws InvalidArgument unless max(grid) + 6 * width < cutoff.
RVec mollified_counting(const RVec& mu_sorted, const RVec& weights, const Mollifier& chi,
                        const RVec& grid, double cutoff);

/// Fit of sum_{k<K} A_k mu^{d-1-k} with weight mu^{-(d-1)}; 1 <= K <= 3.
AsymptoticFit fit_counting(const RVec& grid, const RVec& series, int d, int K);

struct CountingResult {
  RVec grid;
  RVec series;
  AsymptoticFit fit;
};

/// Default window [cutoff/3, 2 cutoff/3] when lo >= hi.
CountingResult counting_fit(const SpectralData& S, const RVec& weights, const Mollifier& chi,
                            double lo = 0.0, double hi = 0.0, int points = 41, int K = 3);

/// |mu| sorted ascending with weights carried along (spectrum of |D|).
std::pair<RVec, RVec> abs_spectrum(const RVec& mu, const RVec& weights);

// ------------------------------------------------------------- closed forms

/// (1 / (2 (2 pi)^d)) int_{|xi|=1} int_T Tr(F + F sigma_D).
double a0_theoretical(const DiracOperatorSpec& D, const TrigMatrixField& F, int sphere_order = 8,
                      int torus_grid = 0);

/// (1 / Gamma(d/2)) int_T Tr(F h1_density).
double a1_theoretical_dirac(const DiracOperatorSpec& D, const TrigMatrixField& F,
                            int torus_grid = 0);

/// (1/(2 pi)^d) int_{|xi|=1} int_T Tr(Sub(A) + (1 - d - m)/2 sigma_A Sub(P)), m = A.order.
/// Evaluated at two resolutions; throws NumericalError if they disagree by
/// more than `tol` (absolute, plus tol times the magnitude).
double a1_theoretical_laplace(const ClassicalSymbol& A, const SymbolFunction& sub_P, int d,
                              int sphere_order = 8, int torus_grid = 4,
                              const FiniteDifference& fd = {}, double tol = 1e-8);

/// Depth-2 symbol of the composition F D (F an endomorphism field).
ClassicalSymbol endomorphism_times_dirac(const DiracOperatorSpec& D, const TrigMatrixField& F);

// -------------------------------------------------------------------- heat

enum class HeatMode { plain, signed_trace, sign };

/// Ladder t_k = 2^{-p + k/2} with p the largest half-integer such that
/// exp(-t_0 cutoff^2) < 1e-14.
RVec default_heat_ladder(double cutoff, int samples = 8);

/// t^{-(d-j)/2} for j = 0 .. count-1.
std::vector<FitTerm> heat_terms(int d, int count = 6);

/// plain: sum w e^{-t mu^2}; signed_trace: sum w mu e^{-t mu^2};
/// sign: sum_{mu != 0} w sign(mu) e^{-t mu^2}.
double heat_trace(const SpectralData& S, const RVec& weights, HeatMode mode, double t);

struct HeatFitResult {
  RVec t;
  RVec trace;
  AsymptoticFit fit;
  int rejected = 0;
};

/// Samples with truncation error e^{-t cutoff^2} * count >= 1e-12 * sum |w| e^{-t mu^2}
/// are rejected; throws NumericalError if fewer samples than terms remain.
HeatFitResult heat_fit(const SpectralData& S, const RVec& weights, HeatMode mode, const RVec& t,
                       const std::vector<FitTerm>& terms);

// ---------------------------------------------------------------- zeta/eta

/// Residue at s0 of zeta(s) = sum w lambda^{-s}, from the coefficient c of
/// t^{-s0/2} in the heat trace: 2 c / Gamma(s0/2).
double residue_from_heat(const AsymptoticFit& heat, double s0);

struct ZetaResult {
  double residue = 0.0;
  HeatFitResult heat;
};

/// Zero modes (|mu| <= 1e-12) are excluded. The first K heat terms must
/// include t^{-s0/2}.
ZetaResult zeta_residue(const SpectralData& S, const RVec& weights, double s0, int K = 3,
                        RVec ladder = {});
/// Same on sign-weighted data: eta(s, A, D) = zeta(s, A Sign(D), D^2).
ZetaResult eta_residue(const SpectralData& S, const RVec& weights, double s0, int K = 3,
                       RVec ladder = {});

/// Continued value zeta(s) via the Mellin split with the first K heat terms
/// subtracted on (0, 1]; s must avoid the subtracted exponents.
double zeta_continued(const SpectralData& S, const RVec& weights, double s, int K = 3,
                      RVec ladder = {});

// --------------------------------------------------------------- resolvent

/// Gamma((d+m-k)/2)/2 * Gamma((N+k-d-m)/2) / Gamma(N/2).
double resolvent_factor(int d, double m, int k, double N);

struct ResolventResult {
  RVec t;
  RVec trace;
  RVec tail_fraction;
  AsymptoticFit fit;  // in t^{-(d-k)/2}
  AsymptoticFit heat; // plain heat fit that supplies the tail density
};

/// sum w (1 + t lambda^2)^{-N/2}, with the spectrum above cutoff/2 replaced
/// smoothly by the density implied by the plain heat coefficients. Throws
/// NumericalError when the completed tail exceeds max_tail_fraction.
ResolventResult resolvent_fit(const SpectralData& S, const RVec& weights, double N,
                              RVec ladder = {}, std::vector<FitTerm> terms = {},
                              double max_tail_fraction = 0.25);

// ---------------------------------------------------------- local counting

/// Tr L_0 = r (4 pi)^{-d/2} / Gamma(d/2).
double tr_l0_theoretical(int d, int r);
/// L_1(x) = h1_density(x) / Gamma(d/2).
Mat l1_theoretical(const DiracOperatorSpec& D, const RVec& x);

/// Counting fit with weights Tr Phi_j(x).
CountingResult local_counting_fit(const SpectralData& S, const RVec& x, const Mollifier& chi,
                                  double lo = 0.0, double hi = 0.0, int points = 41, int K = 3);

}  // namespace spectra_forge
