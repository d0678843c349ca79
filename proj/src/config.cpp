#include "spectra_forge/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spectra_forge/frames.hpp"
#include "spectra_forge/util.hpp"

namespace spectra_forge {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

void reject_unknown(const json& j, const std::string& where, std::set<std::string> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      fail(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
}

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

cplx get_complex(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(field, "expected a number or [re, im]");
}

json put_complex(cplx c) {
  if (c.imag() == 0.0) return c.real();
  return json::array({c.real(), c.imag()});
}

std::vector<double> get_numbers(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> get_ints(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_int(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

TermSpec parse_term(const json& j, int d, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  reject_unknown(j, field, {"k", "coeff", "clifford", "entries", "hermitian"});
  TermSpec t;
  t.k = Frequency(static_cast<std::size_t>(d), 0);
  if (auto p = find(j, "k")) {
    t.k = get_ints(*p, field + ".k");
    if (static_cast<int>(t.k.size()) != d) fail(field + ".k", "expected " + std::to_string(d) + " entries");
  }
  if (auto p = find(j, "coeff")) t.coeff = get_complex(*p, field + ".coeff");
  if (auto p = find(j, "clifford")) {
    t.clifford = get_ints(*p, field + ".clifford");
    for (int i : t.clifford)
      if (i < 1 || i > d) fail(field + ".clifford", "index out of range 1.." + std::to_string(d));
  }
  if (auto p = find(j, "entries")) {
    if (!t.clifford.empty()) fail(field, "give either clifford or entries");
    if (!p->is_array() || p->empty()) fail(field + ".entries", "expected a square matrix");
    std::vector<std::vector<cplx>> rows;
    for (std::size_t r = 0; r < p->size(); ++r) {
      const std::string rf = field + ".entries[" + std::to_string(r) + "]";
      const json& row = (*p)[r];
      if (!row.is_array() || row.size() != p->size()) fail(rf, "expected a square matrix");
      std::vector<cplx> vals;
      for (std::size_t c = 0; c < row.size(); ++c)
        vals.push_back(get_complex(row[c], rf + "[" + std::to_string(c) + "]"));
      rows.push_back(std::move(vals));
    }
    t.entries = std::move(rows);
  }
  if (auto p = find(j, "hermitian")) {
    if (!p->is_boolean()) fail(field + ".hermitian", "expected true or false");
    t.hermitian = p->get<bool>();
  }
  return t;
}

json dump_term(const TermSpec& t) {
  json j;
  j["k"] = t.k;
  j["coeff"] = put_complex(t.coeff);
  if (t.entries) {
    json rows = json::array();
    for (const auto& row : *t.entries) {
      json r = json::array();
      for (cplx c : row) r.push_back(put_complex(c));
      rows.push_back(r);
    }
    j["entries"] = rows;
  } else {
    j["clifford"] = t.clifford;
  }
  j["hermitian"] = t.hermitian;
  return j;
}

std::vector<TermSpec> parse_terms(const json& j, int d, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of terms");
  std::vector<TermSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_term(j[i], d, field + "[" + std::to_string(i) + "]"));
  return out;
}

json dump_terms(const std::vector<TermSpec>& ts) {
  json j = json::array();
  for (const auto& t : ts) j.push_back(dump_term(t));
  return j;
}

bool is_experiment(const std::string& name) {
  for (const auto& [n, desc] : experiment_catalog())
    if (n == name) return true;
  return false;
}

}  // namespace

bool ExperimentParams::operator==(const ExperimentParams& o) const {
  return window_lo == o.window_lo && window_hi == o.window_hi && points == o.points &&
         fit_terms == o.fit_terms && mollifier.kind == o.mollifier.kind &&
         mollifier.delta == o.mollifier.delta && mollifier.grid == o.mollifier.grid &&
         ladder == o.ladder && N == o.N && k == o.k && s == o.s && x == o.x &&
         sphere_order == o.sphere_order && samples == o.samples && trials == o.trials &&
         clifford_d == o.clifford_d && tolerance == o.tolerance;
}

const std::vector<std::pair<std::string, std::string>>& experiment_catalog() {
  static const std::vector<std::pair<std::string, std::string>> cat = {
      {"clifford-check", "anticommutation relations and hat-map grade eigenvalues"},
      {"bw-check", "Bochner-Weitzenboeck residual on random self-adjoint operators"},
      {"counting-fit", "mollified counting fit of A_0, A_1 and local L_0, L_1"},
      {"heat-fit", "plain and signed heat trace ladders and fits"},
      {"zeta", "zeta residues at s = d, d - 1 and continued values"},
      {"eta", "eta residue at s = d - 1"},
      {"resolvent", "resolvent trace fits B_0^(N) and the Gamma-factor ratio"},
      {"residue", "A_k from the Wodzicki residue of the expanded symbol"},
      {"sub-symbol", "subprincipal symbols and the product rule at random points"},
      {"massless", "frame-built massless operator: Sub(D) profile and spectrum"},
      {"report", "cross-check web between counting, heat, eta and residue routes"},
  };
  return cat;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) fail("<root>", "expected an object");
  reject_unknown(j, "", {"experiment", "d", "operator", "F", "spectral", "params", "out", "seed"});

  ExperimentConfig cfg;
  if (auto p = find(j, "experiment")) {
    if (!p->is_string()) fail("experiment", "expected a string");
    cfg.experiment = p->get<std::string>();
    if (!is_experiment(cfg.experiment)) fail("experiment", "unknown experiment '" + cfg.experiment + "'");
  }
  if (auto p = find(j, "d")) cfg.d = get_int(*p, "d");
  if (cfg.d < 1 || cfg.d > 8) fail("d", "must lie in 1..8");
  const int d = cfg.d;

  if (auto p = find(j, "operator")) {
    if (!p->is_object()) fail("operator", "expected an object");
    reject_unknown(*p, "operator", {"psi", "b", "frame"});
    if (auto q = find(*p, "psi")) cfg.op.psi = parse_terms(*q, d, "operator.psi");
    if (auto q = find(*p, "b")) {
      if (!q->is_array() || static_cast<int>(q->size()) != d)
        fail("operator.b", "expected one term list per coordinate");
      for (std::size_t a = 0; a < q->size(); ++a)
        cfg.op.b.push_back(parse_terms((*q)[a], d, "operator.b[" + std::to_string(a) + "]"));
    }
    if (auto q = find(*p, "frame")) {
      if (!q->is_object()) fail("operator.frame", "expected an object");
      reject_unknown(*q, "operator.frame", {"plane", "coordinate", "cos", "sin", "grid"});
      FrameSpec f;
      if (auto r = find(*q, "plane")) {
        const auto pl = get_ints(*r, "operator.frame.plane");
        if (pl.size() != 2) fail("operator.frame.plane", "expected two axes");
        f.a = pl[0];
        f.b = pl[1];
      }
      if (f.a < 1 || f.b < 1 || f.a > d || f.b > d || f.a == f.b)
        fail("operator.frame.plane", "axes must be distinct and within 1.." + std::to_string(d));
      if (auto r = find(*q, "coordinate")) f.coordinate = get_int(*r, "operator.frame.coordinate");
      if (f.coordinate < 1 || f.coordinate > d)
        fail("operator.frame.coordinate", "must lie within 1.." + std::to_string(d));
      if (auto r = find(*q, "cos")) f.cos_coeffs = get_numbers(*r, "operator.frame.cos");
      if (auto r = find(*q, "sin")) f.sin_coeffs = get_numbers(*r, "operator.frame.sin");
      if (auto r = find(*q, "grid")) f.grid = get_int(*r, "operator.frame.grid");
      if (f.grid < 4 || f.grid % 2) fail("operator.frame.grid", "must be even and >= 4");
      if (!cfg.op.b.empty()) fail("operator", "frame and b are mutually exclusive");
      cfg.op.frame = f;
    }
  }
  if (auto p = find(j, "F")) cfg.F = parse_terms(*p, d, "F");

  if (auto p = find(j, "spectral")) {
    if (!p->is_object()) fail("spectral", "expected an object");
    reject_unknown(*p, "spectral", {"method", "lambda", "K", "size_limit"});
    if (auto q = find(*p, "method")) {
      if (!q->is_string()) fail("spectral.method", "expected a string");
      cfg.spectral.method = q->get<std::string>();
      if (cfg.spectral.method != "exact" && cfg.spectral.method != "galerkin" &&
          cfg.spectral.method != "sector")
        fail("spectral.method", "expected exact, galerkin or sector");
    }
    if (auto q = find(*p, "lambda")) cfg.spectral.lambda = get_number(*q, "spectral.lambda");
    if (!(cfg.spectral.lambda > 0)) fail("spectral.lambda", "must be positive");
    if (auto q = find(*p, "K")) cfg.spectral.K = get_int(*q, "spectral.K");
    if (cfg.spectral.K < 0) fail("spectral.K", "must be non-negative");
    if (auto q = find(*p, "size_limit")) cfg.spectral.size_limit = get_int(*q, "spectral.size_limit");
  }

  if (auto p = find(j, "params")) {
    if (!p->is_object()) fail("params", "expected an object");
    reject_unknown(*p, "params",
                   {"window", "points", "fit_terms", "mollifier", "ladder", "N", "k", "s", "x",
                    "sphere_order", "samples", "trials", "clifford_d", "tolerance"});
    auto& P = cfg.params;
    if (auto q = find(*p, "window")) {
      const auto w = get_numbers(*q, "params.window");
      if (w.size() != 2 || !(w[0] < w[1]) || !(w[0] > 0)) fail("params.window", "expected [lo, hi] with 0 < lo < hi");
      P.window_lo = w[0];
      P.window_hi = w[1];
    }
    if (auto q = find(*p, "points")) P.points = get_int(*q, "params.points");
    if (P.points < 2) fail("params.points", "must be >= 2");
    if (auto q = find(*p, "fit_terms")) P.fit_terms = get_int(*q, "params.fit_terms");
    if (P.fit_terms < 1 || P.fit_terms > 3) fail("params.fit_terms", "must lie in 1..3");
    if (auto q = find(*p, "mollifier")) {
      if (!q->is_object()) fail("params.mollifier", "expected an object");
      reject_unknown(*q, "params.mollifier", {"kind", "delta", "grid"});
      if (auto r = find(*q, "kind")) {
        if (!r->is_string()) fail("params.mollifier.kind", "expected a string");
        try {
          P.mollifier.kind = mollifier_kind_from_string(r->get<std::string>());
        } catch (const Error& e) {
          fail("params.mollifier.kind", e.what());
        }
      }
      if (auto r = find(*q, "delta")) P.mollifier.delta = get_number(*r, "params.mollifier.delta");
      if (!(P.mollifier.delta > 0)) fail("params.mollifier.delta", "must be positive");
      if (auto r = find(*q, "grid")) P.mollifier.grid = get_int(*r, "params.mollifier.grid");
    }
    if (auto q = find(*p, "ladder")) {
      P.ladder = get_numbers(*q, "params.ladder");
      for (double t : P.ladder)
        if (!(t > 0)) fail("params.ladder", "entries must be positive");
    }
    if (auto q = find(*p, "N")) P.N = get_numbers(*q, "params.N");
    if (auto q = find(*p, "k")) P.k = get_ints(*q, "params.k");
    if (auto q = find(*p, "s")) P.s = get_numbers(*q, "params.s");
    if (auto q = find(*p, "x")) {
      if (!q->is_array()) fail("params.x", "expected an array of points");
      P.x.clear();
      for (std::size_t i = 0; i < q->size(); ++i) {
        const std::string f = "params.x[" + std::to_string(i) + "]";
        auto v = get_numbers((*q)[i], f);
        if (static_cast<int>(v.size()) != d) fail(f, "expected " + std::to_string(d) + " coordinates");
        P.x.push_back(std::move(v));
      }
    }
    if (auto q = find(*p, "sphere_order")) P.sphere_order = get_int(*q, "params.sphere_order");
    if (auto q = find(*p, "samples")) P.samples = get_int(*q, "params.samples");
    if (auto q = find(*p, "trials")) P.trials = get_int(*q, "params.trials");
    if (auto q = find(*p, "clifford_d")) P.clifford_d = get_int(*q, "params.clifford_d");
    if (auto q = find(*p, "tolerance")) {
      if (!q->is_object()) fail("params.tolerance", "expected an object of numbers");
      for (auto it = q->begin(); it != q->end(); ++it)
        P.tolerance[it.key()] = get_number(it.value(), "params.tolerance." + it.key());
    }
  }
  if (auto p = find(j, "out")) {
    if (!p->is_string()) fail("out", "expected a string");
    cfg.out = p->get<std::string>();
  }
  if (auto p = find(j, "seed")) {
    if (!p->is_number_unsigned() && !(p->is_number_integer() && p->get<long long>() >= 0))
      fail("seed", "expected a non-negative integer");
    cfg.seed = p->get<std::uint64_t>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string dump_config(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["d"] = cfg.d;
  json op;
  op["psi"] = dump_terms(cfg.op.psi);
  if (!cfg.op.b.empty()) {
    json b = json::array();
    for (const auto& list : cfg.op.b) b.push_back(dump_terms(list));
    op["b"] = b;
  }
  if (cfg.op.frame) {
    const auto& f = *cfg.op.frame;
    op["frame"] = {{"plane", {f.a, f.b}},
                   {"coordinate", f.coordinate},
                   {"cos", f.cos_coeffs},
                   {"sin", f.sin_coeffs},
                   {"grid", f.grid}};
  }
  j["operator"] = op;
  j["F"] = dump_terms(cfg.F);
  j["spectral"] = {{"method", cfg.spectral.method},
                   {"lambda", cfg.spectral.lambda},
                   {"K", cfg.spectral.K},
                   {"size_limit", cfg.spectral.size_limit}};
  const auto& P = cfg.params;
  json params;
  if (P.window_lo > 0) params["window"] = {P.window_lo, P.window_hi};
  params["points"] = P.points;
  params["fit_terms"] = P.fit_terms;
  params["mollifier"] = {{"kind", to_string(P.mollifier.kind)},
                         {"delta", P.mollifier.delta},
                         {"grid", P.mollifier.grid}};
  params["ladder"] = P.ladder;
  params["N"] = P.N;
  params["k"] = P.k;
  params["s"] = P.s;
  params["x"] = P.x;
  params["sphere_order"] = P.sphere_order;
  params["samples"] = P.samples;
  params["trials"] = P.trials;
  params["clifford_d"] = P.clifford_d;
  params["tolerance"] = P.tolerance;
  j["params"] = params;
  j["out"] = cfg.out;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.out.clear();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(dump_config(c))));
  return buf;
}

TrigMatrixField build_field(const CliffordModule& mod, const std::vector<TermSpec>& terms,
                            bool empty_is_identity) {
  const int d = mod.d, r = mod.r;
  if (terms.empty() && empty_is_identity) return TrigMatrixField::constant(d, identity(r));
  TrigMatrixField f(d, r);
  for (const auto& t : terms) {
    Mat m;
    if (t.entries) {
      const auto& e = *t.entries;
      if (static_cast<int>(e.size()) != r)
        throw ConfigError("term entries: expected a " + std::to_string(r) + "x" +
                          std::to_string(r) + " matrix");
      m.resize(r, r);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) m(i, j) = e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    } else {
      m = identity(r);
      for (int i : t.clifford) m = m * mod.gammas[static_cast<std::size_t>(i - 1)];
    }
    m *= t.coeff;
    if (t.hermitian)
      f.add_hermitian_term(t.k, m);
    else
      f.add_term(t.k, m);
  }
  return f.pruned();
}

DiracOperatorSpec build_operator(const ExperimentConfig& cfg) {
  const CliffordModule mod = build_gamma(cfg.d);
  const TrigMatrixField psi = build_field(mod, cfg.op.psi, false);
  if (cfg.op.frame) {
    const auto& f = *cfg.op.frame;
    AngleFunction th;
    th.coordinate = f.coordinate - 1;
    th.cos_coeffs = f.cos_coeffs;
    th.sin_coeffs = f.sin_coeffs;
    DiracOperatorSpec D = massless_dirac(rotation_frame(cfg.d, f.a - 1, f.b - 1, th), mod, f.grid);
    D.psi = psi;
    return D;
  }
  std::vector<TrigMatrixField> b;
  for (const auto& list : cfg.op.b) b.push_back(build_field(mod, list, false));
  return make_dirac(mod, std::move(b), psi);
}

}  // namespace spectra_forge
