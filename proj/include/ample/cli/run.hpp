#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ample/chern.hpp"
#include "ample/cli/config.hpp"
#include "ample/criteria.hpp"
#include "ample/errors.hpp"
#include "ample/pointwise/curvature.hpp"
#include "ample/pointwise/lagrange.hpp"
#include "ample/pointwise/lemma.hpp"
#include "ample/pointwise/sweep.hpp"
#include "ample/rational.hpp"

namespace ample::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Verdict strings and the exit status each one maps to. The exit status
/// is a function of the verdict alone.
inline int exit_status_for(const std::string& verdict) {
  static const std::vector<std::pair<std::string, int>> table = {
      {"hypotheses-satisfied", 0},      {"numerically-failed", 1},     {"assertions-missing", 1},
      {"necessary-conditions-hold", 0}, {"necessary-conditions-fail", 1}, {"identities-hold", 0},
      {"identities-fail", 1},           {"lemma-holds", 0},            {"counterexample-found", 1},
      {"closed-form-agrees", 0},        {"closed-form-disagrees", 1},  {"griffiths-positive", 0},
      {"not-griffiths-positive", 1},    {"epsilon-positive", 0},       {"epsilon-nonpositive", 1},
      {"error", 2}};
  for (const auto& [v, code] : table)
    if (v == verdict) return code;
  return 2;
}

struct RunOutcome {
  json report;
  int exit_status = 0;
};

namespace detail {

/// Floats are written as strings with 17 significant digits so that the
/// report text is exact and identical across JSON libraries.
inline json real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

inline json rat(const Rational& x) { return ample::to_string(x); }

inline json divisor_json(const CohClass& c, const SurfaceRing& ring) {
  json out = json::object();
  for (std::size_t i = 0; i < ring.rank(); ++i)
    if (c.deg2[i] != 0) out[ring.basis_names()[i]] = rat(c.deg2[i]);
  return out;
}

inline json ring_json(const SurfaceRing& ring) {
  json rows = json::array();
  for (const auto& row : ring.pairing()) {
    json r = json::array();
    for (const auto& x : row) r.push_back(rat(x));
    rows.push_back(std::move(r));
  }
  return {{"basis", ring.basis_names()}, {"pairing", std::move(rows)}};
}

inline json bundle_json(const BundleExpr& e, const SurfaceRing& ring) {
  return std::visit(
      [&](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, bundle::Line>) {
          return {{"kind", "line"}, {"class", divisor_json(n.c1, ring)}};
        } else if constexpr (std::is_same_v<T, bundle::Sum>) {
          json parts = json::array();
          for (const auto& s : n.summands) parts.push_back(bundle_json(s, ring));
          return {{"kind", "sum"}, {"summands", std::move(parts)}};
        } else if constexpr (std::is_same_v<T, bundle::Twist>) {
          return {{"kind", "twist"}, {"base", bundle_json(*n.base, ring)}, {"by", divisor_json(n.by, ring)}};
        } else {
          return {{"kind", "dual"}, {"base", bundle_json(*n.base, ring)}};
        }
      },
      e.node());
}

inline json vector_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json::array({real(v(i).real()), real(v(i).imag())}));
  return out;
}

inline const char* mode_name(pointwise::SamplerMode m) {
  return m == pointwise::SamplerMode::random ? "random" : "projectively-flat";
}

/// Canonical echo of the validated config. Thread counts and output paths
/// are left out: they must not influence the report.
inline json inputs_json(const RunConfig& cfg) {
  json in = json::object();
  if (cfg.ring) in["ring"] = ring_json(*cfg.ring);
  if (cfg.bundle) in["bundle"] = bundle_json(*cfg.bundle, *cfg.ring);
  if (cfg.chern) in["chern"] = {{"rank", cfg.chern->rank}, {"c1_sq", rat(cfg.chern->c1_sq)}, {"c2", rat(cfg.chern->c2)}};
  if (cfg.command == Command::check || cfg.command == Command::st_check) {
    auto flag = [](Assertion a) { return a == Assertion::asserted; };
    in["assertions"] = {{"c1_positive", flag(cfg.assertions.c1_positive)},
                        {"ample_on_curves", flag(cfg.assertions.ample_on_curves)},
                        {"semistable", flag(cfg.assertions.semistable)}};
  }
  if (cfg.r) in["r"] = *cfg.r;
  if (cfg.a) in["a"] = rat(*cfg.a);
  if (cfg.b) in["b"] = rat(*cfg.b);
  if (cfg.divisor) in["divisor"] = divisor_json(*cfg.divisor, *cfg.ring);
  if (cfg.command == Command::nakai) {
    json curves = json::array();
    for (const auto& c : cfg.curves) curves.push_back(divisor_json(c, *cfg.ring));
    in["curves"] = std::move(curves);
  }
  if (cfg.omega_sq) in["omega_sq"] = rat(*cfg.omega_sq);
  if (cfg.sweep) {
    const auto& s = *cfg.sweep;
    json eps = json::array();
    for (double e : s.epsilons) eps.push_back(real(e));
    in["sweep"] = {{"r", s.ranks},         {"epsilon", eps},           {"samples", s.samples},
                   {"vectors", s.vectors}, {"restarts", s.restarts},   {"tol", real(s.tol)},
                   {"seed", s.seed},       {"worst_rows", s.worst_rows}, {"histogram_bins", s.histogram_bins},
                   {"mode", mode_name(s.mode)}};
  }
  if (cfg.command == Command::lagrange) {
    const auto& l = cfg.lagrange;
    in["lagrange"] = {{"samples", l.samples}, {"seed", l.seed},         {"r_min", l.r_min},
                      {"r_max", l.r_max},     {"mu_max", real(l.mu_max)}, {"b_max", real(l.b_max)}};
  }
  if (cfg.curvature) {
    const auto& c = *cfg.curvature;
    in["curvature"] = {{"r", c.rank}, {"epsilon", real(c.epsilon)}, {"seed", c.seed}, {"mode", mode_name(c.mode)}};
    in["restarts"] = cfg.restarts;
  }
  return in;
}

inline ChernData chern_from_config(const RunConfig& cfg) {
  if (cfg.ring && cfg.bundle) return chern_of(*cfg.bundle, *cfg.ring);
  ChernData cd;
  cd.rank = cfg.chern->rank;
  cd.c2_value = cfg.chern->c2;
  cd.c1_sq_value = cfg.chern->c1_sq;
  return cd;
}

inline json report_json(const CriterionReport& rep) {
  json conditions = json::array();
  for (const auto& c : rep.conditions) conditions.push_back({{"name", c.name}, {"value", rat(c.value)}, {"passed", c.passed}});
  auto flag = [](Assertion a) { return a == Assertion::asserted ? "asserted" : "unknown"; };
  json out = {{"theorem", rep.theorem == Theorem::higher_rank ? "higher-rank" : "rank-two"},
              {"rank", rep.rank},
              {"c1_sq", rat(rep.c1_sq)},
              {"c2", rat(rep.c2)},
              {"c1sq_minus_c2", rat(rep.c1sq_minus_c2)},
              {"lubke_coefficient", rat(rep.lubke_coefficient)},
              {"lubke_gap", rat(rep.lubke_gap)},
              {"conditions", std::move(conditions)},
              {"numerical_pass", rep.numerical_pass()},
              {"assertions",
               {{"c1_positive", flag(rep.assertions.c1_positive)},
                {"ample_on_curves", flag(rep.assertions.ample_on_curves)},
                {"semistable", flag(rep.assertions.semistable)}}}};
  if (rep.st_gap) out["st_gap"] = rat(*rep.st_gap);
  return out;
}

inline json gap_json(const pointwise::LemmaGapResult& g) {
  return {{"lhs_density", real(g.lhs_density)},
          {"rhs_density", real(g.rhs_density)},
          {"gap", real(g.gap)},
          {"gap_proof_line", real(g.gap_proof_line)},
          {"b_along_v", json::array({real(g.b_along_v.real()), real(g.b_along_v.imag())})},
          {"v", vector_json(g.v)}};
}

struct Produced {
  json results;
  std::string verdict;
  json warnings = json::array();
};

inline void add_split_semistability(const RunConfig& cfg, const ChernData& cd, json& results, json& warnings) {
  if (!(cfg.ring && cfg.bundle)) return;
  const auto classes = split_line_classes(*cfg.bundle);
  bool nonzero = false;
  for (const auto& x : cd.c1.deg2) nonzero = nonzero || x != 0;
  if (!nonzero) {
    warnings.push_back("c1(E) is zero; slopes with respect to det(E) are not defined");
    return;
  }
  const auto slopes = split_slopes(classes, cd.c1, *cfg.ring);
  json s = json::array();
  for (const auto& x : slopes) s.push_back(rat(x));
  results["split_slopes"] = std::move(s);
  results["split_semistable"] = is_semistable_split(slopes);
  if (cfg.assertions.semistable == Assertion::asserted && !is_semistable_split(slopes))
    warnings.push_back("semistability is asserted but the summand slopes with respect to det(E) differ");
}

inline Produced run_check(const RunConfig& cfg) {
  Produced p;
  const ChernData cd = chern_from_config(cfg);
  const CriterionReport rep =
      cfg.command == Command::check ? check_main_theorem(cd, cfg.assertions) : check_st_theorem(cd, cfg.assertions);
  p.results = report_json(rep);
  if (cfg.ring && cfg.bundle) p.results["c1"] = divisor_json(cd.c1, *cfg.ring);
  add_split_semistability(cfg, cd, p.results, p.warnings);
  p.verdict = ample::to_string(rep.verdict);
  if (rep.verdict == Verdict::assertions_missing)
    p.warnings.push_back("numerical hypotheses hold; non-numerical hypotheses were not all asserted");
  return p;
}

inline Produced run_epsilon(const RunConfig& cfg) {
  Produced p;
  const ChernData cd = chern_from_config(cfg);
  const Rational eps = epsilon_choice(cd, *cfg.omega_sq);
  p.results = {{"rank", cd.rank},
               {"c1_sq", rat(cd.c1_sq_value)},
               {"c2", rat(cd.c2_value)},
               {"omega_sq", rat(*cfg.omega_sq)},
               {"epsilon", rat(eps)},
               {"epsilon_float", real(to_double(eps))}};
  p.verdict = eps > 0 ? "epsilon-positive" : "epsilon-nonpositive";
  if (eps <= 0) p.warnings.push_back("the criterion inequality fails, so no positive epsilon is available");
  return p;
}

inline Produced run_nakai(const RunConfig& cfg) {
  Produced p;
  const NakaiReport rep = nakai_check(*cfg.divisor, cfg.curves, *cfg.ring);
  json deg = json::array();
  for (const auto& x : rep.curve_degrees) deg.push_back(rat(x));
  p.results = {{"self_intersection", rat(rep.self_intersection)},
               {"curve_degrees", std::move(deg)},
               {"passed", rep.passed},
               {"scope", "necessary conditions over the supplied curve classes only"}};
  if (rep.empty_curve_list) p.warnings.push_back("empty curve list: only the self-intersection was tested");
  p.verdict = rep.passed ? "necessary-conditions-hold" : "necessary-conditions-fail";
  return p;
}

inline Produced run_counterexample(const RunConfig& cfg) {
  Produced p;
  const Counterexample ce = cfg.b ? counterexample_with(*cfg.r, *cfg.a, *cfg.b) : build_counterexample(*cfg.r, *cfg.a);
  const auto& id = ce.identities;
  json slopes = json::array();
  for (const auto& s : id.slopes) slopes.push_back(rat(s));
  p.results = {{"ring", ring_json(ce.ring)},
               {"bundle", bundle_json(ce.bundle, ce.ring)},
               {"b", rat(id.b)},
               {"c1", divisor_json(ce.chern.c1, ce.ring)},
               {"c1_sq", rat(id.c1_sq)},
               {"expected_c1_sq", rat(id.expected_c1_sq)},
               {"c2", rat(id.c2)},
               {"expected_c2", rat(id.expected_c2)},
               {"lubke_coefficient", rat(id.lubke_coefficient)},
               {"lubke_times_c2", rat(id.lubke_times_c2)},
               {"lubke_gap", rat(id.lubke_gap)},
               {"slopes", std::move(slopes)},
               {"slopes_equal", id.slopes_equal}};
  if (cfg.b) p.warnings.push_back("b overridden: the family is only semistable at b = (r-2)a/(r-1)");
  p.verdict = id.all_hold() ? "identities-hold" : "identities-fail";
  return p;
}

inline void write_histogram_csv(const std::string& path, const pointwise::LemmaSweepResult& res) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open histogram file '" + path + "'");
  out << "r,epsilon,bin_lo,bin_hi,count\n";
  for (const auto& c : res.configs)
    for (const auto& b : c.histogram)
      out << c.rank << ',' << real(c.epsilon).get<std::string>() << ',' << real(b.lo).get<std::string>() << ','
          << real(b.hi).get<std::string>() << ',' << b.count << '\n';
}

inline Produced run_verify_lemma(const RunConfig& cfg) {
  Produced p;
  const auto& sweep = *cfg.sweep;
  const pointwise::LemmaSweepResult res = pointwise::run_lemma_sweep(sweep);
  json configs = json::array();
  json rows = json::array();
  for (const auto& c : res.configs) {
    json item = {{"r", c.rank},
                 {"epsilon", real(c.epsilon)},
                 {"config_seed", c.config_seed},
                 {"samples", c.samples},
                 {"min_gap", real(c.min_gap)},
                 {"min_gap_random", real(c.min_gap_random)},
                 {"violations", c.violations},
                 {"unconverged", c.unconverged},
                 {"max_residual", real(c.max_residual)}};
    if (sweep.restarts > 0) item["min_gap_adversarial"] = real(c.min_gap_adversarial);
    if (!c.histogram.empty()) {
      json h = json::array();
      for (const auto& b : c.histogram) h.push_back({{"lo", real(b.lo)}, {"hi", real(b.hi)}, {"count", b.count}});
      item["histogram"] = std::move(h);
    }
    configs.push_back(std::move(item));
    for (const auto& w : c.worst) {
      json row = gap_json(w.result);
      row["r"] = c.rank;
      row["epsilon"] = real(c.epsilon);
      row["sample"] = w.sample;
      row["seed"] = w.seed;
      row["source"] = pointwise::to_string(w.source);
      rows.push_back(std::move(row));
    }
    if (c.unconverged > 0)
      p.warnings.push_back("r=" + std::to_string(c.rank) + " epsilon=" + real(c.epsilon).get<std::string>() + ": " +
                           std::to_string(c.unconverged) + " adversarial searches hit the iteration cap");
  }
  p.results = {{"configs", std::move(configs)},
               {"worst_rows", std::move(rows)},
               {"min_gap", real(res.min_gap)},
               {"max_residual", real(res.max_residual)},
               {"threshold", real(sweep.gap_threshold)}};
  if (!res.holds)
    p.warnings.push_back(
        "gap below threshold; see worst_rows: gap_proof_line repeats the check with the constant of the "
        "final estimate, and |b_along_v| > epsilon marks vectors for which B breaks the entrywise bound in "
        "a frame adapted to v");
  if (cfg.histogram_csv) write_histogram_csv(*cfg.histogram_csv, res);
  p.verdict = res.holds ? "lemma-holds" : "counterexample-found";
  return p;
}

inline Produced run_lagrange(const RunConfig& cfg) {
  Produced p;
  const pointwise::LagrangeCheckResult res = pointwise::run_lagrange_check(cfg.lagrange);
  json b = json::array();
  for (Eigen::Index i = 0; i < res.worst.b_diag.size(); ++i) b.push_back(real(res.worst.b_diag(i)));
  p.results = {{"samples", res.samples},
               {"max_abs_diff", real(res.max_abs_diff)},
               {"tolerance", real(cfg.lagrange.tolerance)},
               {"unconverged", res.unconverged},
               {"worst",
                {{"r", res.worst.r},
                 {"mu", real(res.worst.mu)},
                 {"b_diag", std::move(b)},
                 {"closed_form", real(res.worst.closed_form)},
                 {"numeric", real(res.worst.numeric)}}}};
  p.verdict = res.agrees ? "closed-form-agrees" : "closed-form-disagrees";
  return p;
}

inline Produced run_griffiths(const RunConfig& cfg) {
  Produced p;
  const auto& c = *cfg.curvature;
  const auto pc = pointwise::sample_curvature(c.rank, c.epsilon, c.seed, c.mode);
  const auto g = pointwise::griffiths_min(pc, cfg.restarts);
  p.results = {{"min_eigenvalue", real(g.min_eigenvalue)},
               {"v", vector_json(g.v)},
               {"converged", g.converged},
               {"max_residual", real(pointwise::residuals(pc).max())}};
  if (!g.converged) p.warnings.push_back("search hit the iteration cap; value is the best iterate");
  p.verdict = g.min_eigenvalue > 0 ? "griffiths-positive" : "not-griffiths-positive";
  return p;
}

inline json envelope(const std::string& command, json inputs, json results, const std::string& verdict,
                     json warnings) {
  return {{"command", command},
          {"inputs", std::move(inputs)},
          {"results", std::move(results)},
          {"verdict", verdict},
          {"warnings", std::move(warnings)},
          {"version", kVersion}};
}

inline RunOutcome error_outcome(const std::string& command, json inputs, const std::string& kind,
                                const std::string& message, const std::string& path = "") {
  json rep = envelope(command, std::move(inputs), nullptr, "error", json::array());
  rep["error"] = {{"kind", kind}, {"message", message}, {"path", path}};
  return {std::move(rep), exit_status_for("error")};
}

}  // namespace detail

/// Dispatches a validated config. Module errors become an "error" report.
inline RunOutcome run(const RunConfig& cfg) {
  const std::string command = to_string(cfg.command);
  json inputs = detail::inputs_json(cfg);
  try {
    detail::Produced p;
    switch (cfg.command) {
      case Command::check:
      case Command::st_check: p = detail::run_check(cfg); break;
      case Command::epsilon: p = detail::run_epsilon(cfg); break;
      case Command::nakai: p = detail::run_nakai(cfg); break;
      case Command::counterexample: p = detail::run_counterexample(cfg); break;
      case Command::verify_lemma: p = detail::run_verify_lemma(cfg); break;
      case Command::lagrange: p = detail::run_lagrange(cfg); break;
      case Command::griffiths: p = detail::run_griffiths(cfg); break;
    }
    json rep = detail::envelope(command, std::move(inputs), std::move(p.results), p.verdict, std::move(p.warnings));
    return {std::move(rep), exit_status_for(p.verdict)};
  } catch (const InvalidInput& e) {
    return detail::error_outcome(command, std::move(inputs), "invalid-input", e.what());
  } catch (const InconsistentState& e) {
    return detail::error_outcome(command, std::move(inputs), "inconsistent-state", e.what());
  }
}

/// Parses then runs a config document; parse failures become an "error"
/// report as well.
inline RunOutcome run_document(const json& doc) {
  std::string command = "unknown";
  if (doc.is_object())
    if (auto it = doc.find("command"); it != doc.end() && it->is_string()) command = it->get<std::string>();
  try {
    return run(parse_config(doc));
  } catch (const ParseError& e) {
    return detail::error_outcome(command, doc, "parse-error", e.what(), e.path());
  }
}

/// Report text as written to disk: two-space indent, trailing newline.
inline std::string render(const json& report) { return report.dump(2) + "\n"; }

}  // namespace ample::cli
