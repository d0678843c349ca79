#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spectra_forge/frames.hpp"
#include "spectra_forge/operators.hpp"

using namespace spectra_forge;

namespace {

AngleFunction sine_angle(int coordinate, double amp) {
  AngleFunction a;
  a.coordinate = coordinate;
  a.sin_coeffs = {0.0, amp};
  return a;
}

FrameField twisted(double amp = 1.0) { return rotation_frame(3, 1, 2, sine_angle(0, amp)); }

RVec point(double a, double b, double c) {
  RVec x(3);
  x << a, b, c;
  return x;
}

}  // namespace

TEST_CASE("angle function value and derivative") {
  AngleFunction a;
  a.coordinate = 1;
  a.cos_coeffs = {0.2, 0.5};
  a.sin_coeffs = {7.0, 0.0, -0.3};
  const RVec x = point(9.0, 0.8, -4.0);
  CHECK(a.value(x) == doctest::Approx(0.2 + 0.5 * std::cos(0.8) - 0.3 * std::sin(1.6)).epsilon(1e-14));
  const double h = 1e-6;
  RVec xp = x, xm = x;
  xp(1) += h;
  xm(1) -= h;
  CHECK(a.derivative(x) == doctest::Approx((a.value(xp) - a.value(xm)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("frame matrices are orthogonal with rows X_k") {
  const auto F = twisted(0.7);
  const RVec x = point(0.9, 0.1, 2.0);
  const RMat O = F.matrix(x);
  CHECK((O * O.transpose() - RMat::Identity(3, 3)).norm() < 1e-14);
  const double th = 0.7 * std::sin(0.9);
  CHECK(O(1, 1) == doctest::Approx(std::cos(th)));
  CHECK(O(1, 2) == doctest::Approx(std::sin(th)));
  CHECK(O(2, 1) == doctest::Approx(-std::sin(th)));
  CHECK(O(0, 0) == 1.0);
}

TEST_CASE("frame derivative agrees with finite differences") {
  std::vector<PlaneRotation> rots(2);
  rots[0] = {0, 1, sine_angle(2, 0.4)};
  rots[1].a = 1;
  rots[1].b = 2;
  rots[1].angle.coordinate = 0;
  rots[1].angle.cos_coeffs = {0.3, 0.0, 0.6};
  const FrameField F(3, rots);
  const RVec x = point(0.5, -1.0, 1.4);
  for (int i = 0; i < 3; ++i) {
    RVec xp = x, xm = x;
    const double h = 1e-6;
    xp(i) += h;
    xm(i) -= h;
    const RMat fd = (F.matrix(xp) - F.matrix(xm)) / (2 * h);
    CHECK((F.derivative(x, i) - fd).norm() < 1e-8);
  }
}

TEST_CASE("Christoffel symbols match the finite-difference oracle") {
  std::vector<PlaneRotation> rots(2);
  rots[0] = {0, 2, sine_angle(1, 0.8)};
  rots[1] = {1, 2, sine_angle(0, -0.5)};
  const FrameField F(3, rots);
  for (const RVec& x : {point(0.3, 1.2, -0.7), point(2.5, -0.4, 0.0)}) {
    const auto G = christoffel(F, x);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(G(k, i, j) - oracle::christoffel_fd(F, x, k, i, j)) < 1e-8);
    CHECK(G.antisymmetry_residual() < 1e-14);
  }
}

TEST_CASE("single rotation: Gamma^3_{12} = theta'") {
  const auto F = twisted(1.0);
  const RVec x = point(0.6, 0.0, 0.0);
  const auto G = christoffel(F, x);
  CHECK(G(2, 0, 1) == doctest::Approx(std::cos(0.6)).epsilon(1e-13));
  CHECK(G(1, 0, 2) == doctest::Approx(-std::cos(0.6)).epsilon(1e-13));
  CHECK(std::abs(G(0, 1, 2)) < 1e-15);
}

TEST_CASE("non-periodic angles and invalid planes are rejected") {
  AngleFunction a = sine_angle(0, 1.0);
  a.slope = 1.0;
  CHECK_THROWS_AS(rotation_frame(3, 1, 2, a), InvalidArgument);
  CHECK_THROWS_AS(rotation_frame(3, 1, 1, sine_angle(0, 1.0)), InvalidArgument);
  CHECK_THROWS_AS(rotation_frame(3, 0, 3, sine_angle(0, 1.0)), InvalidArgument);
  CHECK_THROWS_AS(rotation_frame(3, 0, 1, sine_angle(5, 1.0)), InvalidArgument);
}

TEST_CASE("massless subprincipal closed form: -theta'/2") {
  const auto F = twisted(1.0);
  CHECK(sub_massless_theoretical(F, point(0.0, 0.3, 1.0)) == doctest::Approx(-0.5).epsilon(1e-14));
  for (double t : {0.4, 1.9, 3.3})
    CHECK(sub_massless_theoretical(F, point(t, 0.0, 0.0)) ==
          doctest::Approx(-0.5 * std::cos(t)).epsilon(1e-13));
  const FrameField F4 = rotation_frame(4, 1, 2, sine_angle(0, 1.0));
  CHECK_THROWS_AS(sub_massless_theoretical(F4, RVec::Zero(4)), UnsupportedDimension);
}

TEST_CASE("frame gammas satisfy the Clifford relations pointwise") {
  const auto mod = build_gamma(3);
  const auto F = twisted(0.9);
  const auto g = frame_gammas(F, mod, point(1.1, 0.2, -0.3));
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) {
      const Mat ac = g[a] * g[c] + g[c] * g[a] + (a == c ? 2.0 : 0.0) * identity(2);
      CHECK(ac.norm() < 1e-14);
    }
}

TEST_CASE("frame connection is Clifford compatible") {
  const auto mod = build_gamma(3);
  const auto F = twisted(0.9);
  const RVec x = point(1.1, 0.2, -0.3);
  const auto b = frame_connection(F, mod, x);
  for (int a = 0; a < 3; ++a) {
    RVec xp = x, xm = x;
    const double h = 1e-5;
    xp(a) += h;
    xm(a) -= h;
    const auto gp = frame_gammas(F, mod, xp), gm = frame_gammas(F, mod, xm);
    const auto g = frame_gammas(F, mod, x);
    for (int c = 0; c < 3; ++c) {
      const Mat dg = (gp[c] - gm[c]) / (2 * h);
      CHECK((dg - commutator(g[c], b[a])).norm() < 1e-8);
    }
  }
}

TEST_CASE("massless operator is formally self-adjoint and compatible") {
  const auto mod = build_gamma(3);
  const auto D = massless_dirac(twisted(0.5), mod, 32);
  CHECK(D.compatible);
  CHECK_FALSE(D.has_constant_gammas());
  CHECK(adjoint_residual(D, 4, 17) < 1e-8);
  const Mat s = sub_symbol_dirac(D, point(0.0, 0.4, 0.9));
  CHECK((s + 0.25 * identity(2)).norm() < 1e-8);
}
