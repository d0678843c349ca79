#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spectra_forge/operators.hpp"
#include "spectra_forge/residue.hpp"
#include "spectra_forge/symbols.hpp"

using namespace spectra_forge;

namespace {

RVec vec3(double a, double b, double c) {
  RVec v(3);
  v << a, b, c;
  return v;
}

DiracOperatorSpec random_operator(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_self_adjoint_dirac(build_gamma(3), 1, 0.4, rng);
}

Mat scalar(double v) {
  Mat m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("finite differences of a polynomial symbol") {
  const SymbolFunction f = [](const RVec& x, const RVec& xi) {
    return scalar(std::sin(x(0)) * xi(1) * xi(1) + x(1) * xi(1));
  };
  const RVec x = vec3(0.4, 1.5, 0.0), xi = vec3(2.0, -1.0, 0.5);
  CHECK(diff_x(f, x, xi, 0)(0, 0).real() == doctest::Approx(std::cos(0.4)).epsilon(1e-11));
  CHECK(diff_xi(f, x, xi, 1)(0, 0).real() == doctest::Approx(-2 * std::sin(0.4) + 1.5).epsilon(1e-11));
  CHECK(mixed_trace(f, x, xi)(0, 0).real() == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("Poisson bracket of scalar symbols") {
  const SymbolFunction a = [](const RVec& x, const RVec& xi) { return scalar(std::sin(x(0)) * xi(1)); };
  const SymbolFunction b = [](const RVec& x, const RVec& xi) {
    return scalar(xi(0) * xi(0) * std::cos(x(1)));
  };
  const RVec x = vec3(0.7, -0.3, 2.0), xi = vec3(1.2, 0.8, -0.4);
  const double expect = -std::sin(0.7) * 1.44 * std::sin(-0.3) - std::cos(0.7) * 0.8 * 2.4 * std::cos(-0.3);
  CHECK(poisson_bracket(a, b, x, xi)(0, 0).real() == doctest::Approx(expect).epsilon(1e-9));
  CHECK(std::abs((poisson_bracket(a, b, x, xi) + poisson_bracket(b, a, x, xi))(0, 0)) < 1e-12);
}

TEST_CASE("operator symbols are homogeneous") {
  const auto D = random_operator(1);
  const RVec x = vec3(0.2, 1.1, -0.6), xi = vec3(0.3, -0.9, 1.4);
  CHECK(homogeneity_defect(dirac_symbol(D), x, xi) < 1e-12);
  CHECK(homogeneity_defect(laplacian_symbol(D), x, xi) < 1e-12);
}

TEST_CASE("generic subprincipal symbol matches the closed forms") {
  for (std::uint64_t seed : {2u, 3u, 4u}) {
    const auto D = random_operator(seed);
    const RVec x = vec3(0.9, -2.1, 0.4), xi = vec3(-0.5, 0.7, 0.6);
    CHECK((sub_symbol_generic(dirac_symbol(D), x, xi) - sub_symbol_dirac(D, x)).norm() < 1e-6);
    CHECK((sub_symbol_generic(laplacian_symbol(D), x, xi) - sub_symbol_laplacian(D, x, xi)).norm() <
          1e-6);
  }
}

TEST_CASE("subprincipal symbol of a constant grade-one potential") {
  const auto mod = build_gamma(3);
  const Mat psi = 0.3 * kI * mod.gammas[0];
  const auto D = make_dirac(mod, psi);
  const RVec x = vec3(0, 0, 0), xi = vec3(1, 0, 0);
  CHECK((sub_symbol_generic(dirac_symbol(D), x, xi) - psi).norm() < 1e-9);
  CHECK((sub_symbol_generic(laplacian_symbol(D), x, xi) - 0.6 * identity(2)).norm() < 1e-9);
}

TEST_CASE("product rule for Sub") {
  const auto D = random_operator(5);
  const RVec x = vec3(1.3, 0.2, -0.8), xi = vec3(0.6, 0.1, -1.2);
  const auto sD = dirac_symbol(D);
  CHECK(sub_product_residual(sD, sD, x, xi) < 1e-7);
  std::mt19937_64 rng(6);
  const auto F = random_matrix_field(3, 2, 1, 0.5, true, rng);
  const auto sF = endomorphism_symbol(2, [F](const RVec& y) { return F(y); });
  CHECK(sub_product_residual(sF, sD, x, xi) < 1e-7);
  CHECK(sub_product_residual(sD, sF, x, xi) < 1e-7);
}

TEST_CASE("Sub(D^2) from composition equals the Laplacian form") {
  const auto D = random_operator(7);
  const RVec x = vec3(-0.4, 0.9, 2.6), xi = vec3(0.8, -0.2, 0.3);
  const auto sq = compose(dirac_symbol(D), dirac_symbol(D));
  CHECK((sub_symbol_generic(sq, x, xi) - sub_symbol_laplacian(D, x, xi)).norm() < 1e-6);
}

TEST_CASE("trace of the Poisson bracket integrates to zero over the torus") {
  const auto D = random_operator(8);
  const auto sD = dirac_symbol(D);
  std::mt19937_64 rng(9);
  const auto F = random_matrix_field(3, 2, 1, 0.5, false, rng);
  const SymbolFunction f = [F](const RVec& y, const RVec&) { return F(y); };
  const RVec xi = vec3(0.4, -0.7, 1.0);
  const int G = 6;
  cplx total = 0;
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j)
      for (int k = 0; k < G; ++k) {
        const RVec x = vec3(2 * kPi * i / G, 2 * kPi * j / G, 2 * kPi * k / G);
        total += (poisson_bracket(sD.components[0], f, x, xi)).trace();
      }
  CHECK(std::abs(total) / (G * G * G) < 1e-9);
}

TEST_CASE("Sub of a fractional power of D^2") {
  const auto mod = build_gamma(3);
  const auto D = make_dirac(mod, 0.3 * kI * mod.gammas[0] + 0.2 * identity(2));
  RVec ladder(7);
  ladder << 4, 6, 8, 12, 16, 24, 32;
  CHECK(sub_power_residual(D, -1.5, vec3(0.6, 0.0, 0.8), ladder) < 1e-5);
  CHECK(sub_power_residual(D, 0.5, vec3(0.0, 1.0, 0.0), ladder) < 1e-5);
}

TEST_CASE("shallow symbols are rejected") {
  ClassicalSymbol a;
  a.rank = 1;
  a.components.push_back([](const RVec&, const RVec&) { return scalar(1.0); });
  CHECK_THROWS_AS(sub_symbol_generic(a, vec3(0, 0, 0), vec3(1, 0, 0)), InvalidArgument);
  const auto e = endomorphism_symbol(2, [](const RVec&) { return identity(2); });
  const auto D = dirac_symbol(random_operator(1));
  ClassicalSymbol one = e;
  one.rank = 1;
  CHECK_THROWS_AS(compose(one, D), ShapeMismatch);
}
