#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spectra_forge/trig_field.hpp"

using namespace spectra_forge;

namespace {

RVec point(std::initializer_list<double> v) {
  RVec x(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

}  // namespace

TEST_CASE("evaluation matches the direct Fourier sum") {
  std::mt19937_64 rng(1);
  const auto f = random_matrix_field(2, 2, 2, 1.0, false, rng);
  const RVec x = point({0.3, -1.1});
  Mat direct = Mat::Zero(2, 2);
  for (const auto& [n, c] : f.coefficients())
    direct += c * std::exp(kI * (n[0] * x(0) + n[1] * x(1)));
  CHECK((f(x) - direct).norm() < 1e-13);
}

TEST_CASE("derivative agrees with central differences") {
  std::mt19937_64 rng(2);
  const auto f = random_matrix_field(3, 2, 2, 1.0, true, rng);
  const RVec x = point({0.4, 1.7, -2.2});
  for (int j = 0; j < 3; ++j) {
    RVec xp = x, xm = x;
    const double h = 1e-5;
    xp(j) += h;
    xm(j) -= h;
    const Mat fd = (f(xp) - f(xm)) / (2 * h);
    CHECK((f.derivative(j)(x) - fd).norm() < 1e-7 * (1 + fd.norm()));
  }
}

TEST_CASE("pointwise product, adjoint and constants") {
  std::mt19937_64 rng(3);
  const auto a = random_matrix_field(2, 2, 1, 1.0, false, rng);
  const auto b = random_matrix_field(2, 2, 2, 1.0, false, rng);
  const RVec x = point({2.1, 0.6});
  CHECK(((a * b)(x) - a(x) * b(x)).norm() < 1e-12);
  CHECK((a.adjoint()(x) - a(x).adjoint()).norm() < 1e-13);
  Mat m(2, 2);
  m << 1, 2, 3, 4;
  CHECK(((m * a)(x) - m * a(x)).norm() < 1e-12);
  CHECK(((a * m)(x) - a(x) * m).norm() < 1e-12);
  const auto c = TrigMatrixField::constant(2, m);
  CHECK(c.is_constant());
  CHECK_FALSE(a.is_constant());
  CHECK(c.max_frequency() == 0);
  CHECK(b.max_frequency() == 2);
}

TEST_CASE("Hermitian terms give Hermitian values") {
  TrigMatrixField f(3, 2);
  Mat c(2, 2);
  c << 1.0, cplx(0, 2), cplx(0.5, -1), 3.0;
  f.add_hermitian_term({1, 0, -2}, c);
  CHECK(f.is_hermitian());
  const Mat v = f(point({0.2, 0.9, -0.4}));
  CHECK((v - v.adjoint()).norm() < 1e-14);
  TrigMatrixField g(3, 2);
  g.add_term({1, 0, 0}, c);
  CHECK_FALSE(g.is_hermitian());
}

TEST_CASE("shape errors are reported") {
  TrigMatrixField f(2, 2);
  CHECK_THROWS_AS(f.add_term({1, 0, 0}, Mat::Identity(2, 2)), ShapeMismatch);
  CHECK_THROWS_AS(f.add_term({1, 0}, Mat::Identity(3, 3)), ShapeMismatch);
  CHECK_THROWS_AS(f += TrigMatrixField::constant(2, Mat::Identity(3, 3)), ShapeMismatch);
}

TEST_CASE("sampling recovers a trigonometric polynomial") {
  std::mt19937_64 rng(4);
  const auto f = random_matrix_field(2, 2, 3, 1.0, false, rng);
  const auto g = sample_to_trig(2, 2, 8, [&](const RVec& x) { return f(x); });
  CHECK((g - f).max_abs() < 1e-13);
}

TEST_CASE("sampling a smooth non-polynomial function converges") {
  auto fun = [](const RVec& x) {
    Mat m(1, 1);
    m(0, 0) = std::exp(0.5 * std::cos(x(0)));
    return m;
  };
  const auto g = sample_to_trig(1, 1, 32, fun, 1e-16);
  const RVec x = point({0.77});
  CHECK(std::abs(g(x)(0, 0) - fun(x)(0, 0)) < 1e-14);
}

TEST_CASE("frequency box") {
  const auto box = frequency_box(3, 2);
  CHECK(box.size() == 125);
  CHECK(box.front() == Frequency{-2, -2, -2});
  CHECK(box.back() == Frequency{2, 2, 2});
  CHECK(std::is_sorted(box.begin(), box.end()));
}

TEST_CASE("inner product is the flat L2 product") {
  std::mt19937_64 rng(5);
  const auto u = random_section(2, 2, 2, rng);
  const auto v = random_section(2, 2, 2, rng);
  // Trapezoid rule on 8 x 8 nodes integrates the degree-4 product exactly.
  const int G = 8;
  cplx q = 0;
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      const RVec x = point({2 * oracle::pi * i / G, 2 * oracle::pi * j / G});
      q += u(x).dot(v(x));
    }
  q *= std::pow(2 * oracle::pi / G, 2);
  CHECK(std::abs(u.inner(v) - q) < 1e-11 * (1 + std::abs(q)));
  CHECK(std::abs(u.norm() * u.norm() - u.inner(u).real()) < 1e-11 * u.inner(u).real());
}

TEST_CASE("matrix field acts on sections pointwise") {
  std::mt19937_64 rng(6);
  const auto f = random_matrix_field(2, 2, 1, 1.0, false, rng);
  const auto s = random_section(2, 2, 2, rng);
  const RVec x = point({1.3, -0.2});
  CHECK(((f * s)(x) - f(x) * s(x)).norm() < 1e-12);
  CHECK((s.derivative(1)(x) - [&] {
          Vec acc = Vec::Zero(2);
          for (const auto& [n, c] : s.coefficients())
            acc += kI * static_cast<double>(n[1]) * c * std::exp(kI * (n[0] * x(0) + n[1] * x(1)));
          return acc;
        }()).norm() < 1e-12);
}

TEST_CASE("pruning drops negligible coefficients") {
  TrigMatrixField f(1, 1);
  Mat small(1, 1), big(1, 1);
  small(0, 0) = 1e-20;
  big(0, 0) = 1.0;
  f.add_term({3}, small);
  f.add_term({1}, big);
  CHECK(f.max_frequency() == 3);
  CHECK(f.pruned(1e-15).max_frequency() == 1);
}
