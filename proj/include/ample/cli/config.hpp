#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ample/chern.hpp"
#include "ample/criteria.hpp"
#include "ample/errors.hpp"
#include "ample/intersect_ring.hpp"
#include "ample/pointwise/curvature.hpp"
#include "ample/pointwise/lagrange.hpp"
#include "ample/pointwise/sweep.hpp"
#include "ample/rational.hpp"

namespace ample::cli {

using json = nlohmann::json;

enum class Command { check, st_check, nakai, counterexample, verify_lemma, lagrange, griffiths, epsilon };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::check: return "check";
    case Command::st_check: return "st-check";
    case Command::nakai: return "nakai";
    case Command::counterexample: return "counterexample";
    case Command::verify_lemma: return "verify-lemma";
    case Command::lagrange: return "lagrange";
    case Command::griffiths: return "griffiths";
    case Command::epsilon: return "epsilon";
  }
  return "?";
}

inline std::optional<Command> command_from_string(std::string_view s) {
  for (Command c : {Command::check, Command::st_check, Command::nakai, Command::counterexample,
                    Command::verify_lemma, Command::lagrange, Command::griffiths, Command::epsilon})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

/// Chern numbers given directly, without a ring or bundle.
struct ChernNumbers {
  int rank = 0;
  Rational c1_sq;
  Rational c2;
};

struct CurvatureSpec {
  int rank = 2;
  double epsilon = 0;
  std::uint64_t seed = 0;
  pointwise::SamplerMode mode = pointwise::SamplerMode::random;
};

struct RunConfig {
  Command command = Command::check;
  std::optional<SurfaceRing> ring;
  std::optional<BundleExpr> bundle;
  std::optional<ChernNumbers> chern;
  HypothesisAssertions assertions;
  std::optional<int> r;
  std::optional<Rational> a;
  std::optional<Rational> b;
  std::optional<CohClass> divisor;
  std::vector<CohClass> curves;
  std::optional<Rational> omega_sq;
  std::optional<pointwise::LemmaSweepConfig> sweep;
  std::optional<std::string> histogram_csv;
  pointwise::LagrangeCheckConfig lagrange;
  std::optional<CurvatureSpec> curvature;
  int restarts = 10;
  std::optional<std::string> output_path;
};

namespace detail {

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) throw ParseError(path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw ParseError(child(path, key), "unknown key '" + key + "'");
  }
}

inline const json& require(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(child(path, key), "missing required field '" + key + "'");
  return *it;
}

inline Rational parse_rational_value(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return parse_rational(v.dump());
  } catch (const InvalidInput& e) {
    throw ParseError(path, e.what());
  }
  throw ParseError(path, "expected a rational written as \"p/q\" or an integer");
}

inline std::int64_t parse_int(const json& v, const std::string& path, std::int64_t lo,
                              std::int64_t hi = std::numeric_limits<std::int64_t>::max()) {
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo || x > hi)
    throw ParseError(path, "integer " + std::to_string(x) + " out of range [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
  return x;
}

inline std::uint64_t parse_seed(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ParseError(path, "seed must be a nonnegative integer");
}

inline double parse_real(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number");
  return v.get<double>();
}

inline bool parse_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ParseError(path, "expected true or false");
  return v.get<bool>();
}

inline std::string parse_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path, "expected a string");
  return v.get<std::string>();
}

inline SurfaceRing parse_ring(const json& j, const std::string& path) {
  reject_unknown(j, path, {"basis", "pairing"});
  const json& basis = require(j, path, "basis");
  if (!basis.is_array()) throw ParseError(child(path, "basis"), "expected an array of names");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < basis.size(); ++i) names.push_back(parse_string(basis[i], child(child(path, "basis"), i)));
  const json& pairing = require(j, path, "pairing");
  const std::string ppath = child(path, "pairing");
  if (!pairing.is_array()) throw ParseError(ppath, "expected a row-major matrix");
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < pairing.size(); ++i) {
    if (!pairing[i].is_array()) throw ParseError(child(ppath, i), "expected a row");
    std::vector<Rational> row;
    for (std::size_t k = 0; k < pairing[i].size(); ++k)
      row.push_back(parse_rational_value(pairing[i][k], child(child(ppath, i), k)));
    rows.push_back(std::move(row));
  }
  try {
    return SurfaceRing(std::move(names), std::move(rows));
  } catch (const InvalidInput& e) {
    throw ParseError(path, e.what());
  }
}

/// {"L": "1", "H": "2"}: coefficients on the named basis divisors.
inline CohClass parse_divisor(const json& j, const std::string& path, const SurfaceRing& ring) {
  if (!j.is_object()) throw ParseError(path, "divisor class must be an object of basis-name -> rational");
  CohClass c = CohClass::zero(ring.rank());
  for (const auto& [name, coeff] : j.items()) {
    std::size_t idx = 0;
    try {
      idx = ring.index_of(name);
    } catch (const InvalidInput& e) {
      throw ParseError(child(path, name), e.what());
    }
    c.deg2[idx] = parse_rational_value(coeff, child(path, name));
  }
  return c;
}

inline BundleExpr parse_bundle(const json& j, const std::string& path, const SurfaceRing& ring) {
  if (!j.is_object()) throw ParseError(path, "bundle node must be an object");
  const std::string kind = parse_string(require(j, path, "kind"), child(path, "kind"));
  if (kind == "line") {
    reject_unknown(j, path, {"kind", "class"});
    return BundleExpr::line(parse_divisor(require(j, path, "class"), child(path, "class"), ring));
  }
  if (kind == "sum") {
    reject_unknown(j, path, {"kind", "summands"});
    const json& s = require(j, path, "summands");
    const std::string spath = child(path, "summands");
    if (!s.is_array()) throw ParseError(spath, "expected an array of bundle nodes");
    if (s.empty()) throw ParseError(spath, "direct sum with no summands");
    std::vector<BundleExpr> parts;
    for (std::size_t i = 0; i < s.size(); ++i) parts.push_back(parse_bundle(s[i], child(spath, i), ring));
    return BundleExpr::sum(std::move(parts));
  }
  if (kind == "twist") {
    reject_unknown(j, path, {"kind", "base", "by"});
    return BundleExpr::twist(parse_bundle(require(j, path, "base"), child(path, "base"), ring),
                             parse_divisor(require(j, path, "by"), child(path, "by"), ring));
  }
  if (kind == "dual") {
    reject_unknown(j, path, {"kind", "base"});
    return BundleExpr::dual(parse_bundle(require(j, path, "base"), child(path, "base"), ring));
  }
  throw ParseError(child(path, "kind"), "unknown bundle kind '" + kind + "' (line, sum, twist, dual)");
}

inline HypothesisAssertions parse_assertions(const json& j, const std::string& path) {
  reject_unknown(j, path, {"c1_positive", "ample_on_curves", "semistable"});
  HypothesisAssertions a;
  auto flag = [&](const char* key, Assertion& out) {
    if (auto it = j.find(key); it != j.end())
      out = parse_bool(*it, child(path, key)) ? Assertion::asserted : Assertion::unknown;
  };
  flag("c1_positive", a.c1_positive);
  flag("ample_on_curves", a.ample_on_curves);
  flag("semistable", a.semistable);
  return a;
}

inline ChernNumbers parse_chern(const json& j, const std::string& path) {
  reject_unknown(j, path, {"rank", "c1_sq", "c2"});
  ChernNumbers c;
  c.rank = static_cast<int>(parse_int(require(j, path, "rank"), child(path, "rank"), 1, 1 << 20));
  c.c1_sq = parse_rational_value(require(j, path, "c1_sq"), child(path, "c1_sq"));
  c.c2 = parse_rational_value(require(j, path, "c2"), child(path, "c2"));
  return c;
}

inline pointwise::SamplerMode parse_mode(const json& v, const std::string& path) {
  const std::string m = parse_string(v, path);
  if (m == "random") return pointwise::SamplerMode::random;
  if (m == "projectively-flat") return pointwise::SamplerMode::projectively_flat;
  throw ParseError(path, "unknown sampler mode '" + m + "' (random, projectively-flat)");
}

inline pointwise::LemmaSweepConfig parse_sweep(const json& j, const std::string& path,
                                               std::optional<std::string>& histogram_csv) {
  reject_unknown(j, path,
                 {"r", "epsilon", "samples", "vectors", "restarts", "tol", "seed", "worst_rows", "histogram_bins",
                  "histogram_csv", "mode", "threads"});
  pointwise::LemmaSweepConfig s;
  {
    const json& rs = require(j, path, "r");
    const std::string rp = child(path, "r");
    if (!rs.is_array() || rs.empty()) throw ParseError(rp, "expected a nonempty array of ranks");
    s.ranks.clear();
    for (std::size_t i = 0; i < rs.size(); ++i)
      s.ranks.push_back(static_cast<int>(parse_int(rs[i], child(rp, i), 2, 64)));
  }
  {
    const json& es = require(j, path, "epsilon");
    const std::string ep = child(path, "epsilon");
    if (!es.is_array() || es.empty()) throw ParseError(ep, "expected a nonempty array of epsilons");
    s.epsilons.clear();
    for (std::size_t i = 0; i < es.size(); ++i) {
      const double e = parse_real(es[i], child(ep, i));
      if (!(e >= 0)) throw ParseError(child(ep, i), "epsilon must be >= 0");
      s.epsilons.push_back(e);
    }
  }
  s.samples = parse_int(require(j, path, "samples"), child(path, "samples"), 1);
  if (auto it = j.find("vectors"); it != j.end())
    s.vectors = static_cast<int>(parse_int(*it, child(path, "vectors"), 0, 1 << 20));
  if (auto it = j.find("restarts"); it != j.end())
    s.restarts = static_cast<int>(parse_int(*it, child(path, "restarts"), 0, 1 << 20));
  if (auto it = j.find("tol"); it != j.end()) {
    s.tol = parse_real(*it, child(path, "tol"));
    if (!(s.tol > 0)) throw ParseError(child(path, "tol"), "tol must be positive");
  }
  if (auto it = j.find("seed"); it != j.end()) s.seed = parse_seed(*it, child(path, "seed"));
  if (auto it = j.find("worst_rows"); it != j.end())
    s.worst_rows = static_cast<int>(parse_int(*it, child(path, "worst_rows"), 0, 1 << 16));
  if (auto it = j.find("histogram_bins"); it != j.end())
    s.histogram_bins = static_cast<int>(parse_int(*it, child(path, "histogram_bins"), 0, 1 << 16));
  if (auto it = j.find("histogram_csv"); it != j.end()) {
    histogram_csv = parse_string(*it, child(path, "histogram_csv"));
    if (s.histogram_bins == 0) s.histogram_bins = 50;
  }
  if (auto it = j.find("mode"); it != j.end()) s.mode = parse_mode(*it, child(path, "mode"));
  if (auto it = j.find("threads"); it != j.end())
    s.threads = static_cast<unsigned>(parse_int(*it, child(path, "threads"), 0, 4096));
  if (s.vectors == 0 && s.restarts == 0) throw ParseError(path, "need vectors > 0 or restarts > 0");
  return s;
}

inline pointwise::LagrangeCheckConfig parse_lagrange(const json& j, const std::string& path) {
  reject_unknown(j, path, {"samples", "seed", "r_min", "r_max", "mu_max", "b_max"});
  pointwise::LagrangeCheckConfig c;
  if (auto it = j.find("samples"); it != j.end()) c.samples = parse_int(*it, child(path, "samples"), 1);
  if (auto it = j.find("seed"); it != j.end()) c.seed = parse_seed(*it, child(path, "seed"));
  if (auto it = j.find("r_min"); it != j.end()) c.r_min = static_cast<int>(parse_int(*it, child(path, "r_min"), 2, 64));
  if (auto it = j.find("r_max"); it != j.end()) c.r_max = static_cast<int>(parse_int(*it, child(path, "r_max"), 2, 64));
  if (c.r_max < c.r_min) throw ParseError(child(path, "r_max"), "r_max must be >= r_min");
  if (auto it = j.find("mu_max"); it != j.end()) c.mu_max = parse_real(*it, child(path, "mu_max"));
  if (auto it = j.find("b_max"); it != j.end()) {
    c.b_max = parse_real(*it, child(path, "b_max"));
    if (!(c.b_max >= 0)) throw ParseError(child(path, "b_max"), "b_max must be >= 0");
  }
  return c;
}

inline CurvatureSpec parse_curvature(const json& j, const std::string& path) {
  reject_unknown(j, path, {"r", "epsilon", "seed", "mode"});
  CurvatureSpec c;
  c.rank = static_cast<int>(parse_int(require(j, path, "r"), child(path, "r"), 2, 64));
  if (auto it = j.find("epsilon"); it != j.end()) {
    c.epsilon = parse_real(*it, child(path, "epsilon"));
    if (!(c.epsilon >= 0)) throw ParseError(child(path, "epsilon"), "epsilon must be >= 0");
  }
  if (auto it = j.find("seed"); it != j.end()) c.seed = parse_seed(*it, child(path, "seed"));
  if (auto it = j.find("mode"); it != j.end()) c.mode = parse_mode(*it, child(path, "mode"));
  return c;
}

}  // namespace detail

/// Validates an already-parsed config document.
inline RunConfig parse_config(const json& doc) {
  using namespace detail;
  const std::string root;
  reject_unknown(doc, root,
                 {"command", "ring", "bundle", "chern", "assertions", "r", "a", "b", "divisor", "curves", "omega_sq",
                  "sweep", "lagrange", "curvature", "restarts", "output_path"});
  RunConfig cfg;
  const std::string name = parse_string(require(doc, root, "command"), "/command");
  auto cmd = command_from_string(name);
  if (!cmd) throw ParseError("/command", "unknown command '" + name + "'");
  cfg.command = *cmd;

  if (auto it = doc.find("ring"); it != doc.end()) cfg.ring = parse_ring(*it, "/ring");
  if (auto it = doc.find("bundle"); it != doc.end()) {
    if (!cfg.ring) throw ParseError("/ring", "missing required field 'ring' (needed to read 'bundle')");
    cfg.bundle = parse_bundle(*it, "/bundle", *cfg.ring);
  }
  if (auto it = doc.find("chern"); it != doc.end()) cfg.chern = parse_chern(*it, "/chern");
  if (auto it = doc.find("assertions"); it != doc.end()) cfg.assertions = parse_assertions(*it, "/assertions");
  if (auto it = doc.find("r"); it != doc.end()) cfg.r = static_cast<int>(parse_int(*it, "/r", 1, 1 << 20));
  if (auto it = doc.find("a"); it != doc.end()) cfg.a = parse_rational_value(*it, "/a");
  if (auto it = doc.find("b"); it != doc.end()) cfg.b = parse_rational_value(*it, "/b");
  if (auto it = doc.find("divisor"); it != doc.end()) {
    if (!cfg.ring) throw ParseError("/ring", "missing required field 'ring' (needed to read 'divisor')");
    cfg.divisor = parse_divisor(*it, "/divisor", *cfg.ring);
  }
  if (auto it = doc.find("curves"); it != doc.end()) {
    if (!cfg.ring) throw ParseError("/ring", "missing required field 'ring' (needed to read 'curves')");
    if (!it->is_array()) throw ParseError("/curves", "expected an array of divisor classes");
    for (std::size_t i = 0; i < it->size(); ++i) cfg.curves.push_back(parse_divisor((*it)[i], child("/curves", i), *cfg.ring));
  }
  if (auto it = doc.find("omega_sq"); it != doc.end()) cfg.omega_sq = parse_rational_value(*it, "/omega_sq");
  if (auto it = doc.find("sweep"); it != doc.end()) cfg.sweep = parse_sweep(*it, "/sweep", cfg.histogram_csv);
  if (auto it = doc.find("lagrange"); it != doc.end()) cfg.lagrange = parse_lagrange(*it, "/lagrange");
  if (auto it = doc.find("curvature"); it != doc.end()) cfg.curvature = parse_curvature(*it, "/curvature");
  if (auto it = doc.find("restarts"); it != doc.end())
    cfg.restarts = static_cast<int>(parse_int(*it, "/restarts", 1, 1 << 20));
  if (auto it = doc.find("output_path"); it != doc.end()) cfg.output_path = parse_string(*it, "/output_path");

  // Per-command requirements.
  auto need_chern_source = [&] {
    if (cfg.chern) return;
    if (!cfg.ring) throw ParseError("/ring", "missing required field 'ring' (or give 'chern' numbers)");
    if (!cfg.bundle) throw ParseError("/bundle", "missing required field 'bundle' (or give 'chern' numbers)");
  };
  switch (cfg.command) {
    case Command::check:
    case Command::st_check:
      need_chern_source();
      break;
    case Command::epsilon:
      need_chern_source();
      if (!cfg.omega_sq) throw ParseError("/omega_sq", "missing required field 'omega_sq'");
      break;
    case Command::nakai:
      if (!cfg.ring) throw ParseError("/ring", "missing required field 'ring'");
      if (!cfg.divisor) throw ParseError("/divisor", "missing required field 'divisor'");
      if (doc.find("curves") == doc.end()) throw ParseError("/curves", "missing required field 'curves'");
      break;
    case Command::counterexample:
      if (!cfg.r) throw ParseError("/r", "missing required field 'r'");
      if (!cfg.a) throw ParseError("/a", "missing required field 'a'");
      break;
    case Command::verify_lemma:
      if (!cfg.sweep) throw ParseError("/sweep", "missing required field 'sweep'");
      break;
    case Command::griffiths:
      if (!cfg.curvature) throw ParseError("/curvature", "missing required field 'curvature'");
      break;
    case Command::lagrange:
      break;
  }
  return cfg;
}

/// Parses JSON text; syntax errors carry the byte offset.
inline RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

// Exact matches for text arguments; without them a string literal converts
// equally well to json and to string_view.
inline RunConfig parse_config(const char* text) { return parse_config(std::string_view(text)); }
inline RunConfig parse_config(const std::string& text) { return parse_config(std::string_view(text)); }

/// AMPLE_SEED handling: when `env_value` is set, it replaces every seed the
/// command reads (sweep, lagrange, curvature). Applied before parsing.
inline void apply_seed_override(json& doc, std::string_view env_value) {
  std::uint64_t seed = 0;
  try {
    std::size_t used = 0;
    seed = std::stoull(std::string(env_value), &used, 10);
    if (used != env_value.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw ParseError("", "AMPLE_SEED must be a nonnegative integer, got '" + std::string(env_value) + "'");
  }
  if (doc.is_object() && doc.value("command", "") == "lagrange" && !doc.contains("lagrange"))
    doc["lagrange"] = json::object();
  for (const char* key : {"sweep", "lagrange", "curvature"})
    if (auto it = doc.find(key); it != doc.end() && it->is_object()) (*it)["seed"] = seed;
}

}  // namespace ample::cli
