#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spectra_forge/operators.hpp"
#include "spectra_forge/spectral.hpp"

using namespace spectra_forge;

namespace {

constexpr double kPi4 = 4.0 * kPi;

}  // namespace

TEST_CASE("apply on a plane wave: (i gamma.k + psi) v") {
  const auto mod = build_gamma(3);
  const Mat psi = 0.3 * kI * mod.gammas[0];
  const auto D = make_dirac(mod, psi);
  const Frequency k{1, -2, 3};
  const Vec v = Vec::Random(2);
  TrigVectorField s(3, 2);
  s.add_term(k, v);
  const auto Ds = apply(D, s);
  REQUIRE(Ds.coefficients().size() == 1);
  const Mat sym = kI * (1.0 * mod.gammas[0] - 2.0 * mod.gammas[1] + 3.0 * mod.gammas[2]) + psi;
  CHECK((Ds.coefficient(k) - sym * v).norm() < 1e-14);
}

TEST_CASE("apply with x-dependent connection matches pointwise evaluation") {
  const auto mod = build_gamma(2);
  std::mt19937_64 rng(9);
  const auto D = random_self_adjoint_dirac(mod, 1, 0.5, rng);
  const auto s = random_section(2, 2, 2, rng);
  RVec x(2);
  x << 0.7, -1.9;
  Vec expect = zeroth_order_field(D)(x) * s(x);
  for (int a = 0; a < 2; ++a) expect += mod.gammas[a] * s.derivative(a)(x);
  CHECK((apply(D, s)(x) - expect).norm() < 1e-12);
  CHECK_THROWS_AS(apply(D, random_section(2, 1, 1, rng)), ShapeMismatch);
}

TEST_CASE("adjoint residual: self-adjoint vs non-self-adjoint potentials") {
  const auto mod = build_gamma(3);
  std::mt19937_64 rng(10);
  CHECK(adjoint_residual(random_self_adjoint_dirac(mod, 1, 0.4, rng), 5, 1) < 1e-12);
  CHECK(adjoint_residual(make_dirac(mod, 0.3 * kI * mod.gammas[0]), 5, 1) < 1e-12);
  CHECK(adjoint_residual(make_dirac(mod, kI * identity(2)), 5, 1) > 0.1);
  CHECK_THROWS_AS(adjoint_residual(make_dirac(mod, identity(2)), 0, 1), InvalidArgument);
}

TEST_CASE("compatible form moves the non-scalar part of b into the potential") {
  const auto mod = build_gamma(3);
  std::vector<TrigMatrixField> b;
  for (int a = 0; a < 3; ++a) b.push_back(TrigMatrixField::zero(3, 2));
  const Mat B = kI * 0.2 * identity(2) + 0.5 * mod.gammas[1];
  b[0] = TrigMatrixField::constant(3, B);
  const auto D = make_dirac(mod, b, {});
  const auto cf = compatible_form(D);
  CHECK((cf.connection[0].coefficient({0, 0, 0}) - kI * 0.2 * identity(2)).norm() < 1e-15);
  CHECK((cf.potential.coefficient({0, 0, 0}) - mod.gammas[0] * 0.5 * mod.gammas[1]).norm() < 1e-15);
  CHECK((zeroth_order_field(D).coefficient({0, 0, 0}) - mod.gammas[0] * B).norm() < 1e-15);
}

TEST_CASE("Bochner-Weitzenboeck: constant scalar potential gives V = (1 - d) c^2") {
  for (int d : {2, 3, 4}) {
    const auto mod = build_gamma(d);
    const double c = 0.7;
    const auto D = make_dirac(mod, c * identity(mod.r));
    const auto bw = bw_decompose(D);
    CHECK((bw.V.coefficient(Frequency(d, 0)) - (1.0 - d) * c * c * identity(mod.r)).norm() < 1e-14);
    CHECK(bw_residual(D, 3, 2) < 1e-12);
  }
}

TEST_CASE("Bochner-Weitzenboeck: grade-one potential gives V = psi^2 + sum L_j^2") {
  const auto mod = build_gamma(3);
  const Mat psi = 0.3 * kI * mod.gammas[0];
  const auto bw = bw_decompose(make_dirac(mod, psi));
  // L_j = 0.3 i gamma^j gamma^1 sym part = -0.3 i delta_{j1} Id.
  CHECK((bw.connection[0].coefficient({0, 0, 0}) - 0.3 * kI * identity(2)).norm() < 1e-15);
  CHECK((bw.V.coefficient({0, 0, 0}) - 0.0 * identity(2)).norm() < 1e-14);
}

TEST_CASE("Bochner-Weitzenboeck residual for random operators") {
  for (int d : {2, 3}) {
    std::mt19937_64 rng(20 + d);
    const auto D = random_self_adjoint_dirac(build_gamma(d), 1, 0.5, rng);
    CHECK(bw_residual(D, 3, 5) < 1e-10);
  }
}

TEST_CASE("h1 density examples") {
  const auto mod = build_gamma(3);
  RVec x = RVec::Zero(3);
  const double pref = std::pow(kPi4, -1.5);
  CHECK(h1_density(make_dirac(mod, 0.3 * kI * mod.gammas[0]), x).norm() < 1e-16);
  CHECK((h1_density(make_dirac(mod, 0.5 * identity(2)), x) + pref * identity(2)).norm() < 1e-15);
  const Mat psi = 0.4 * kI * mod.gammas[1] + 0.2 * identity(2);
  CHECK((h1_density(make_dirac(mod, psi), x) + 0.4 * pref * identity(2)).norm() < 1e-15);
}

TEST_CASE("subprincipal symbol examples") {
  const auto mod = build_gamma(3);
  RVec x = RVec::Zero(3), xi(3);
  xi << 0.2, -1.0, 0.5;
  const Mat psi = 0.3 * kI * mod.gammas[0];
  const auto D = make_dirac(mod, psi);
  CHECK((sub_symbol_dirac(D, x) - psi).norm() < 1e-15);
  Mat expect = Mat::Zero(2, 2);
  for (int k = 0; k < 3; ++k) expect += kI * (mod.gammas[k] * psi + psi * mod.gammas[k]) * xi(k);
  CHECK((sub_symbol_laplacian(D, x, xi) - expect).norm() < 1e-14);
  // gamma^k psi + psi gamma^k = -0.6 i delta_{k1}: the D^2 sub-symbol is 0.6 xi_1.
  CHECK((sub_symbol_laplacian(D, x, xi) - 0.6 * xi(0) * identity(2)).norm() < 1e-14);
}

TEST_CASE("Dirac symbol components") {
  const auto mod = build_gamma(3);
  const auto D = make_dirac(mod, 0.2 * identity(2));
  const auto s = dirac_symbol(D);
  CHECK(s.order == 1.0);
  REQUIRE(s.depth() == 2);
  RVec x = RVec::Zero(3), xi(3);
  xi << 1.0, 2.0, -0.5;
  CHECK((s.principal(x, xi) - kI * mod.gamma(xi)).norm() < 1e-15);
  CHECK((s.components[1](x, xi) - 0.2 * identity(2)).norm() < 1e-15);
  const auto p = laplacian_symbol(D);
  CHECK((p.principal(x, xi) - xi.squaredNorm() * identity(2)).norm() < 1e-13);
}

TEST_CASE("Galerkin matrix reproduces apply on the basis") {
  const auto mod = build_gamma(2);
  std::mt19937_64 rng(31);
  const auto D = random_self_adjoint_dirac(mod, 1, 0.5, rng);
  const auto basis = frequency_box(2, 3);
  const Mat G = galerkin_matrix(D, basis);
  CHECK((G - G.adjoint()).norm() < 1e-12);
  const auto s = random_section(2, 2, 2, rng);
  Vec c = Vec::Zero(static_cast<Eigen::Index>(basis.size()) * 2);
  for (std::size_t b = 0; b < basis.size(); ++b) c.segment(2 * b, 2) = s.coefficient(basis[b]);
  const Vec Gc = G * c;
  const auto Ds = apply(D, s);
  for (std::size_t b = 0; b < basis.size(); ++b)
    CHECK((Gc.segment(2 * b, 2) - Ds.coefficient(basis[b])).norm() < 1e-12);
}
