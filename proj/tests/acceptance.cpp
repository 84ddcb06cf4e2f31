// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Detail lines are indented.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ample/chern.hpp"
#include "ample/cli/run.hpp"
#include "ample/criteria.hpp"
#include "ample/pointwise/lagrange.hpp"
#include "ample/pointwise/lemma.hpp"
#include "ample/pointwise/sweep.hpp"
#include "oracles.hpp"

using namespace ample;
using namespace ample::pointwise;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

void detail(const std::string& line) { std::printf("    %s\n", line.c_str()); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Outcome ac1() {
  int cases = 0;
  for (int r = 3; r <= 10; ++r)
    for (const Rational& a : {Rational(1), Rational(2), Rational(1, 2), Rational(7, 3)}) {
      const Counterexample ce = build_counterexample(r, a);
      ++cases;
      if (ce.chern.c1_sq_value != Rational(r) * (r - 1) * a || ce.identities.lubke_gap != 0 || !ce.identities.all_hold())
        return {false, "r=" + std::to_string(r) + " a=" + to_string(a) + ": c1^2=" + to_string(ce.chern.c1_sq_value) +
                           " gap=" + to_string(ce.identities.lubke_gap)};
    }
  return {true, std::to_string(cases) + " cases, c1^2 = r(r-1)a and lubke_gap = 0 exactly"};
}

Outcome ac2() {
  Rng rng(0xac2);
  int perturbed = 0;
  for (int r = 3; r <= 10; ++r)
    for (const Rational& a : {Rational(1), Rational(2), Rational(1, 2), Rational(7, 3)}) {
      const Rational b = Rational(r - 2) * a / (r - 1);
      if (!counterexample_with(r, a, b).identities.slopes_equal)
        return {false, "slopes differ on the boundary at r=" + std::to_string(r)};
      std::vector<Rational> deltas{Rational(1), Rational(-1), Rational(1, 1000000), Rational(-7, 3)};
      for (int k = 0; k < 8; ++k) {
        Rational d = oracle::small_rational(rng, 50);
        if (d == 0) d = Rational(1, 97);
        deltas.push_back(d);
      }
      for (const Rational& d : deltas) {
        ++perturbed;
        if (counterexample_with(r, a, b + d).identities.slopes_equal)
          return {false, "slopes equal off the boundary at r=" + std::to_string(r) + " delta=" + to_string(d)};
      }
    }
  return {true, "slopes equal at b=(r-2)a/(r-1); unequal in all " + std::to_string(perturbed) + " perturbations"};
}

Outcome ac3() {
  if (lubke_coefficient(2) != 2) return {false, "lubke_coefficient(2) = " + to_string(lubke_coefficient(2))};
  for (int c1 = -5; c1 <= 5; ++c1)
    for (int c2 = -5; c2 <= 5; ++c2) {
      ChernData cd;
      cd.rank = 2;
      cd.c1_sq_value = c1;
      cd.c2_value = c2;
      if (check_main_theorem(cd, {}).lubke_gap != *check_st_theorem(cd, {}).st_gap)
        return {false, "gap mismatch at c1^2=" + std::to_string(c1) + " c2=" + std::to_string(c2)};
    }
  return {true, "lubke_coefficient(2) = 2; higher-rank gap equals rank-two gap"};
}

Outcome ac4() {
  LemmaSweepConfig cfg;
  cfg.ranks = {2, 3, 4, 5, 6};
  cfg.epsilons = {0.0, 0.01, 0.1};
  cfg.samples = 100000;
  cfg.vectors = 10;
  cfg.restarts = 5;
  cfg.seed = 2024;
  cfg.worst_rows = 1;
  cfg.gap_threshold = -1e-9;
  const LemmaSweepResult res = run_lemma_sweep(cfg);
  for (const auto& c : res.configs) {
    std::string line = "r=" + std::to_string(c.rank) + " eps=" + fmt(c.epsilon) + " min_gap=" + fmt(c.min_gap) +
                       " violations=" + std::to_string(c.violations) + " unconverged=" + std::to_string(c.unconverged);
    if (!c.worst.empty() && c.worst[0].result.gap < cfg.gap_threshold) {
      const auto& w = c.worst[0];
      line += " | worst sample " + std::to_string(w.sample) + " (" + to_string(w.source) +
              "): gap_proof_line=" + fmt(w.result.gap_proof_line) + " |b_along_v|=" + fmt(std::abs(w.result.b_along_v));
    }
    detail(line);
  }
  return {res.holds, "min gap " + fmt(res.min_gap) + " over 15 configurations x 1e5 samples (threshold -1e-9)"};
}

Outcome ac5() {
  double worst = 0;
  for (int r = 2; r <= 8; ++r) {
    const PointCurvature pc = projectively_flat(r, 0.0);
    Rng rng(sub_seed(0xac5, r));
    for (int k = 0; k < 1000; ++k) worst = std::max(worst, std::abs(lemma_gap(pc, random_unit_vector(r, rng)).gap));
  }
  return {worst <= 1e-12, "max |gap| = " + fmt(worst) + " (tolerance 1e-12)"};
}

Outcome ac6() {
  LagrangeCheckConfig cfg;
  cfg.samples = 1000;
  cfg.seed = 0xac6;
  cfg.r_min = 2;
  cfg.r_max = 8;
  cfg.mu_max = 2.0;
  cfg.b_max = 0.2;
  cfg.tolerance = 1e-6;
  const LagrangeCheckResult res = run_lagrange_check(cfg);
  return {res.agrees && res.unconverged == 0,
          "max |closed form - projected gradient| = " + fmt(res.max_abs_diff) + " (tolerance 1e-6), unconverged " +
              std::to_string(res.unconverged)};
}

Outcome ac7() {
  double worst = 0;
  int n = 0;
  for (int r = 2; r <= 6; ++r)
    for (double eps : {0.0, 0.01, 0.1})
      for (int k = 0; k < 667; ++k, ++n) {
        const PointCurvature pc = sample_curvature(r, eps, sub_seed(sub_seed(0xac7, r), n));
        worst = std::max(worst, std::abs(chern_densities(pc).c2 - oracle::c2_pairwise(pc)));
      }
  return {worst <= 1e-10 && n >= 10000,
          std::to_string(n) + " curvatures, max |trace - pairwise| = " + fmt(worst) + " (tolerance 1e-10)"};
}

Outcome ac8() {
  Rng rng(0xac8);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 1 + static_cast<std::size_t>(rng.unit() * 4);
    std::vector<std::vector<Rational>> p(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) p[i][j] = p[j][i] = oracle::small_rational(rng, 9);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back("D" + std::to_string(i));
    const SurfaceRing ring(names, p);
    const int n = 1 + static_cast<int>(rng.unit() * 6);
    std::vector<std::vector<Rational>> classes;
    std::vector<BundleExpr> lines;
    for (int s = 0; s < n; ++s) {
      std::vector<Rational> x(k);
      for (auto& xi : x) xi = oracle::small_rational(rng, 6);
      classes.push_back(x);
      lines.push_back(BundleExpr::line(CohClass::divisor(x)));
    }
    const ChernData cd = chern_of(BundleExpr::sum(lines), ring);
    std::vector<Rational> e1(k);
    for (const auto& c : classes)
      for (std::size_t i = 0; i < k; ++i) e1[i] += c[i];
    if (cd.rank != n || cd.c1.deg2 != e1 || cd.c2_value != oracle::e2(classes, p) ||
        cd.c1_sq_value != oracle::bilinear(e1, e1, p))
      return {false, "mismatch at trial " + std::to_string(trial)};
  }
  return {true, "1000 random rings and sums of <= 6 line bundles match e1, e2 exactly"};
}

Outcome ac9() {
  double worst = 0;
  std::int64_t n = 0;
  for (int r = 2; r <= 6; ++r)
    for (double eps : {0.0, 0.01, 0.1}) {
      const std::uint64_t cs = lemma_config_seed(0xac9, r, eps);
      for (std::int64_t k = 0; k < 6667; ++k, ++n)
        worst = std::max(worst, residuals(sample_curvature(r, eps, lemma_sample_seed(cs, k))).max());
    }
  return {worst <= 1e-12 && n >= 100000,
          std::to_string(n) + " samples, max residual = " + fmt(worst) + " (tolerance 1e-12)"};
}

Outcome ac10() {
  using nlohmann::json;
  auto sweep = [](unsigned threads) {
    return json{{"command", "verify-lemma"},
                {"sweep",
                 {{"r", {2, 3, 4}}, {"epsilon", {0, 0.1}}, {"samples", 1000}, {"seed", 7}, {"threads", threads},
                  {"histogram_bins", 8}}}};
  };
  std::vector<json> docs{
      sweep(1),
      sweep(4),
      {{"command", "counterexample"}, {"r", 5}, {"a", "7/3"}},
      {{"command", "lagrange"}, {"lagrange", {{"samples", 1000}, {"seed", 3}}}},
      {{"command", "griffiths"}, {"curvature", {{"r", 4}, {"epsilon", 0.1}, {"seed", 11}}}},
  };
  std::vector<std::string> first;
  for (const auto& d : docs) {
    const std::string a = cli::render(cli::run_document(d).report);
    const std::string b = cli::render(cli::run_document(d).report);
    if (a != b) return {false, "two runs differ for command " + d["command"].get<std::string>()};
    first.push_back(a);
  }
  if (first[0] != first[1]) return {false, "sweep report depends on the thread count"};
  return {true, "reports byte-identical across reruns and across 1 vs 4 threads"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC-1", ac1}, {"AC-2", ac2}, {"AC-3", ac3}, {"AC-4", ac4}, {"AC-5", ac5},
      {"AC-6", ac6}, {"AC-7", ac7}, {"AC-8", ac8}, {"AC-9", ac9}, {"AC-10", ac10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s  %s  [%.2fs]\n", o.pass ? "PASS" : "FAIL", name, o.summary.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
