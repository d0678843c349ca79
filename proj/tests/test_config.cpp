#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "spectra_forge/config.hpp"

using namespace spectra_forge;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kFull = R"({
  "experiment": "counting-fit",
  "d": 3,
  "operator": {
    "psi": [ { "coeff": [0, 0.3], "clifford": [1] },
             { "k": [1, 0, 0], "coeff": 0.1, "entries": [[1, 0], [0, -1]], "hermitian": true } ],
    "b": [ [ { "coeff": [0, 0.2] } ], [], [] ]
  },
  "F": [ { "coeff": 1 } ],
  "spectral": { "method": "galerkin", "lambda": 12, "K": 5, "size_limit": 3000 },
  "params": {
    "window": [4, 9], "points": 31, "fit_terms": 2,
    "mollifier": { "kind": "gaussian", "delta": 1.5, "grid": 256 },
    "ladder": [0.01, 0.02], "N": [5, 9], "k": [0], "s": [4.5],
    "x": [[0, 0, 0]], "sphere_order": 12, "samples": 7, "trials": 3, "clifford_d": 4,
    "tolerance": { "a0": 0.05 }
  },
  "out": "somewhere",
  "seed": 42
})";

}  // namespace

TEST_CASE("defaults") {
  const auto cfg = parse_config(R"({"experiment": "zeta"})");
  CHECK(cfg.d == 3);
  CHECK(cfg.spectral.method == "exact");
  CHECK(cfg.spectral.lambda == 40.0);
  CHECK(cfg.params.points == 41);
  CHECK(cfg.params.N == std::vector<double>{5.0, 7.0});
  CHECK(cfg.F.empty());
  CHECK(cfg.seed == 0);
}

TEST_CASE("full config parses and round-trips through dump") {
  const auto cfg = parse_config(kFull);
  CHECK(cfg.op.psi.size() == 2);
  CHECK(cfg.op.psi[0].coeff == cplx(0, 0.3));
  CHECK(cfg.op.psi[0].clifford == std::vector<int>{1});
  CHECK(cfg.op.psi[1].entries.has_value());
  CHECK(cfg.op.psi[1].hermitian);
  CHECK(cfg.op.b.size() == 3);
  CHECK(cfg.spectral.K == 5);
  CHECK(cfg.params.mollifier.kind == MollifierKind::gaussian);
  CHECK(cfg.params.tolerance.at("a0") == 0.05);
  CHECK(cfg.seed == 42);
  const auto again = parse_config(dump_config(cfg));
  CHECK(again == cfg);
  CHECK(dump_config(again) == dump_config(cfg));
}

TEST_CASE("frame block round-trips") {
  const auto cfg = parse_config(R"({"experiment": "massless",
    "operator": {"frame": {"plane": [2, 3], "coordinate": 1, "sin": [0, 0.5]}},
    "spectral": {"method": "sector", "lambda": 12, "K": 24}})");
  REQUIRE(cfg.op.frame.has_value());
  CHECK(cfg.op.frame->a == 2);
  CHECK(cfg.op.frame->sin_coeffs == std::vector<double>{0, 0.5});
  CHECK(parse_config(dump_config(cfg)) == cfg);
}

TEST_CASE("diagnostics name the offending field") {
  CHECK(error_of(R"({"experiment": "nope"})").find("experiment") != std::string::npos);
  CHECK(error_of(R"({"experiment": "zeta", "bogus": 1})").find("bogus") != std::string::npos);
  CHECK(error_of(R"({"experiment": "zeta", "spectral": {"lambda": -1}})").find("spectral.lambda") !=
        std::string::npos);
  CHECK(error_of(R"({"experiment": "zeta", "operator": {"psi": [{"clifford": [4]}]}})")
            .find("operator.psi[0].clifford") != std::string::npos);
  CHECK(error_of(R"({"experiment": "zeta", "operator": {"psi": [{"k": [1, 0]}]}})")
            .find("operator.psi[0].k") != std::string::npos);
  CHECK(error_of(R"({"experiment": "zeta", "params": {"mollifier": {"kind": "box"}}})")
            .find("params.mollifier.kind") != std::string::npos);
  CHECK(error_of(R"({"experiment": "zeta", "params": {"x": [[1, 2]]}})").find("params.x[0]") !=
        std::string::npos);
  CHECK(error_of(R"({"experiment": "zeta", "seed": -3})").find("seed") != std::string::npos);
  CHECK(error_of(R"({"experiment": "massless", "operator": {"frame": {"plane": [2, 2]}}})")
            .find("operator.frame.plane") != std::string::npos);
  CHECK(error_of(R"({"experiment": "zeta", "params": {"window": [9, 4]}})").find("params.window") !=
        std::string::npos);
}

TEST_CASE("syntax errors report the position") {
  const std::string msg = error_of("{\n  \"experiment\": \"zeta\",\n  \"d\": \n}");
  CHECK(msg.find("parse error") != std::string::npos);
  CHECK(msg.find("line 4") != std::string::npos);
}

TEST_CASE("missing files are config errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config hash ignores the output directory only") {
  auto a = parse_config(kFull);
  auto b = a;
  b.out = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = 43;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("build_operator assembles psi and b") {
  const auto cfg = parse_config(kFull);
  const auto D = build_operator(cfg);
  const auto& g = D.mod.gammas;
  Mat expect = 0.3 * kI * g[0];
  CHECK((D.psi.coefficient({0, 0, 0}) - expect).norm() < 1e-15);
  Mat sz = Mat::Zero(2, 2);
  sz(0, 0) = 0.1;
  sz(1, 1) = -0.1;
  CHECK((D.psi.coefficient({1, 0, 0}) - sz).norm() < 1e-15);
  CHECK((D.psi.coefficient({-1, 0, 0}) - sz).norm() < 1e-15);
  CHECK((D.b[0].coefficient({0, 0, 0}) - 0.2 * kI * identity(2)).norm() < 1e-15);
  CHECK(D.b[1].coefficients().empty());
}

TEST_CASE("build_field: empty list is the identity when requested") {
  const auto mod = build_gamma(3);
  CHECK((build_field(mod, {}, true).coefficient({0, 0, 0}) - identity(2)).norm() == 0.0);
  CHECK(build_field(mod, {}, false).coefficients().empty());
}

TEST_CASE("frame configs build a compatible massless operator") {
  const auto cfg = parse_config(R"({"experiment": "massless",
    "operator": {"frame": {"plane": [2, 3], "coordinate": 1, "sin": [0, 0.5], "grid": 16}}})");
  const auto D = build_operator(cfg);
  CHECK(D.compatible);
  CHECK_FALSE(D.has_constant_gammas());
}

TEST_CASE("catalog lists every experiment once") {
  const auto& cat = experiment_catalog();
  CHECK(cat.size() == 11);
  for (const auto& [name, desc] : cat) {
    CHECK_FALSE(desc.empty());
    CHECK(parse_config("{\"experiment\": \"" + name + "\"}").experiment == name);
  }
}
