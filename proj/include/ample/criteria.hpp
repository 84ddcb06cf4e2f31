#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ample/chern.hpp"
#include "ample/errors.hpp"
#include "ample/intersect_ring.hpp"
#include "ample/rational.hpp"

namespace ample {

/// 2r(r-1) / (r^2 - 2r + 2), the weight on c2 in the higher-rank criterion.
inline Rational lubke_coefficient(int r) {
  if (r < 1) throw InvalidInput("rank must be positive");
  const Rational rr = r;
  return 2 * rr * (rr - 1) / (rr * rr - 2 * rr + 2);
}

enum class Assertion { unknown, asserted };

/// Hypotheses that no finite computation on ring data can decide; the
/// caller vouches for them.
struct HypothesisAssertions {
  Assertion c1_positive = Assertion::unknown;
  Assertion ample_on_curves = Assertion::unknown;
  Assertion semistable = Assertion::unknown;

  bool all_asserted() const {
    return c1_positive == Assertion::asserted && ample_on_curves == Assertion::asserted &&
           semistable == Assertion::asserted;
  }
};

enum class Verdict { hypotheses_satisfied, numerically_failed, assertions_missing };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::hypotheses_satisfied: return "hypotheses-satisfied";
    case Verdict::numerically_failed: return "numerically-failed";
    case Verdict::assertions_missing: return "assertions-missing";
  }
  return "?";
}

enum class Theorem { higher_rank, rank_two };

struct NumericalCondition {
  std::string name;  // e.g. "lubke_gap > 0"
  Rational value;
  bool passed = false;
};

struct CriterionReport {
  Theorem theorem = Theorem::higher_rank;
  int rank = 0;
  Rational c1_sq;
  Rational c2;
  Rational c1sq_minus_c2;
  Rational lubke_coefficient;
  Rational lubke_gap;
  std::optional<Rational> st_gap;  // rank 2 only
  HypothesisAssertions assertions;
  std::vector<NumericalCondition> conditions;
  Verdict verdict = Verdict::numerically_failed;

  bool numerical_pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.passed; });
  }
};

namespace detail {

inline CriterionReport base_report(Theorem thm, const ChernData& cd, const HypothesisAssertions& as) {
  CriterionReport rep;
  rep.theorem = thm;
  rep.rank = cd.rank;
  rep.c1_sq = cd.c1_sq_value;
  rep.c2 = cd.c2_value;
  rep.c1sq_minus_c2 = cd.c1_sq_value - cd.c2_value;
  rep.lubke_coefficient = lubke_coefficient(cd.rank);
  rep.lubke_gap = cd.c1_sq_value - rep.lubke_coefficient * cd.c2_value;
  if (cd.rank == 2) rep.st_gap = cd.c1_sq_value - 2 * cd.c2_value;
  rep.assertions = as;
  return rep;
}

inline void add_condition(CriterionReport& rep, std::string name, const Rational& value) {
  rep.conditions.push_back({std::move(name), value, value > 0});
}

inline void settle_verdict(CriterionReport& rep) {
  if (!rep.numerical_pass())
    rep.verdict = Verdict::numerically_failed;
  else if (!rep.assertions.all_asserted())
    rep.verdict = Verdict::assertions_missing;
  else
    rep.verdict = Verdict::hypotheses_satisfied;
}

}  // namespace detail

/// Numerical hypotheses of the rank-r criterion on a surface:
/// (c1^2 - c2).X > 0 and (c1^2 - lubke_coefficient(r) c2).X > 0, both strict.
inline CriterionReport check_main_theorem(const ChernData& cd, const HypothesisAssertions& assertions) {
  if (cd.rank < 2) throw InvalidInput("higher-rank criterion needs rank >= 2; use nakai_check for line bundles");
  CriterionReport rep = detail::base_report(Theorem::higher_rank, cd, assertions);
  detail::add_condition(rep, "c1_sq - c2 > 0", rep.c1sq_minus_c2);
  detail::add_condition(rep, "lubke_gap > 0", rep.lubke_gap);
  detail::settle_verdict(rep);
  return rep;
}

/// Rank-two criterion: (c1^2 - 2 c2).X > 0 and c2.X > 0.
inline CriterionReport check_st_theorem(const ChernData& cd, const HypothesisAssertions& assertions) {
  if (cd.rank != 2) throw InvalidInput("rank-two criterion applies only to rank 2 bundles");
  CriterionReport rep = detail::base_report(Theorem::rank_two, cd, assertions);
  detail::add_condition(rep, "c1_sq - 2 c2 > 0", *rep.st_gap);
  detail::add_condition(rep, "c2 > 0", rep.c2);
  detail::settle_verdict(rep);
  return rep;
}

/// min(1, 2((r^2-2r+2) c1^2 - 2r(r-1) c2) / (r(r^2+1) omega_sq)), the
/// approximation parameter for the Hermitian-Einstein metric. Not clamped
/// below: a nonpositive value means the criterion inequality fails.
inline Rational epsilon_choice(const ChernData& cd, const Rational& omega_sq) {
  if (omega_sq <= 0) throw InvalidInput("integral of omega^2 must be positive");
  const Rational r = cd.rank;
  Rational numerator = 2 * ((r * r - 2 * r + 2) * cd.c1_sq_value - 2 * r * (r - 1) * cd.c2_value);
  Rational ratio = numerator / (r * (r * r + 1) * omega_sq);
  return ratio < 1 ? ratio : Rational(1);
}

/// Necessary conditions of the Nakai-Moishezon criterion over a finite
/// list of curve classes. Passing does not prove ampleness: the list is
/// whatever the caller supplied.
struct NakaiReport {
  Rational self_intersection;
  std::vector<Rational> curve_degrees;
  bool passed = false;
  bool empty_curve_list = false;
  static constexpr bool necessary_conditions_only = true;
};

inline NakaiReport nakai_check(const CohClass& d, const std::vector<CohClass>& curves, const SurfaceRing& ring) {
  detail::require_divisor(d, ring);
  NakaiReport rep;
  rep.self_intersection = intersection_number(d, d, ring);
  rep.passed = rep.self_intersection > 0;
  for (const auto& c : curves) {
    detail::require_divisor(c, ring);
    rep.curve_degrees.push_back(intersection_number(d, c, ring));
    rep.passed = rep.passed && rep.curve_degrees.back() > 0;
  }
  rep.empty_curve_list = curves.empty();
  return rep;
}

/// Exact check of every identity displayed for E = L + H + ... + H on
/// X = P(F), where c1(L)^2 = 0, c1(L).c1(H) = a and c1(H)^2 = b.
struct CounterexampleIdentities {
  int r = 0;
  Rational a;
  Rational b;
  Rational c1_sq;
  Rational expected_c1_sq;  // r(r-1) a
  Rational c2;
  Rational expected_c2;  // (r-1) a + (r-1)(r-2) b / 2
  Rational lubke_coefficient;
  Rational lubke_times_c2;
  Rational lubke_gap;
  std::vector<Rational> slopes;  // w.r.t. c1(E), summands in order L, H, ..., H
  bool slopes_equal = false;

  bool all_hold() const {
    return c1_sq == expected_c1_sq && c2 == expected_c2 && lubke_gap == 0 && lubke_times_c2 == c1_sq &&
           slopes_equal;
  }
};

struct Counterexample {
  SurfaceRing ring;
  BundleExpr bundle;
  ChernData chern;
  CounterexampleIdentities identities;
};

/// Two-generator ring {L, H} with the given pairing entries, and the bundle
/// L + (r-1) H on it.
inline Counterexample counterexample_with(int r, const Rational& a, const Rational& b) {
  if (r < 3) throw InvalidInput("counterexample family needs r >= 3");
  if (a <= 0) throw InvalidInput("c1(L).c1(H) must be positive");
  SurfaceRing ring({"L", "H"}, {{0, a}, {a, b}});
  const CohClass l = CohClass::basis(2, 0);
  const CohClass h = CohClass::basis(2, 1);
  std::vector<BundleExpr> parts{BundleExpr::line(l)};
  std::vector<CohClass> classes{l};
  for (int i = 1; i < r; ++i) {
    parts.push_back(BundleExpr::line(h));
    classes.push_back(h);
  }
  BundleExpr e = BundleExpr::sum(std::move(parts));
  ChernData cd = chern_of(e, ring);

  CounterexampleIdentities id;
  const Rational rr = r;
  id.r = r;
  id.a = a;
  id.b = b;
  id.c1_sq = cd.c1_sq_value;
  id.expected_c1_sq = rr * (rr - 1) * a;
  id.c2 = cd.c2_value;
  id.expected_c2 = (rr - 1) * a + (rr - 1) * (rr - 2) / 2 * b;
  id.lubke_coefficient = lubke_coefficient(r);
  id.lubke_times_c2 = id.lubke_coefficient * cd.c2_value;
  id.lubke_gap = cd.c1_sq_value - id.lubke_times_c2;
  id.slopes = split_slopes(classes, cd.c1, ring);
  id.slopes_equal = is_semistable_split(id.slopes);
  return Counterexample{std::move(ring), std::move(e), std::move(cd), std::move(id)};
}

/// The boundary family: b = (r-2) a / (r-1), which is exactly the
/// semistability condition, and then the criterion inequality is an
/// equality.
inline Counterexample build_counterexample(int r, const Rational& a) {
  if (r < 3) throw InvalidInput("counterexample family needs r >= 3");
  const Rational rr = r;
  return counterexample_with(r, a, (rr - 2) * a / (rr - 1));
}

}  // namespace ample
