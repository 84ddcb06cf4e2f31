#pragma once

#include <cstddef>
#include <memory>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "ample/errors.hpp"
#include "ample/intersect_ring.hpp"
#include "ample/rational.hpp"

namespace ample {

class BundleExpr;

namespace bundle {

struct Line {
  CohClass c1;
};
struct Sum {
  std::vector<BundleExpr> summands;
};
struct Twist {
  std::shared_ptr<const BundleExpr> base;
  CohClass by;
};
struct Dual {
  std::shared_ptr<const BundleExpr> base;
};

}  // namespace bundle

/// Immutable expression tree of bundles built from line bundles with
/// Whitney sums, line-bundle twists and duals. Subtrees are shared.
class BundleExpr {
 public:
  using Node = std::variant<bundle::Line, bundle::Sum, bundle::Twist, bundle::Dual>;

  static BundleExpr line(CohClass c1) { return BundleExpr(bundle::Line{std::move(c1)}); }
  static BundleExpr sum(std::vector<BundleExpr> summands) {
    return BundleExpr(bundle::Sum{std::move(summands)});
  }
  static BundleExpr twist(BundleExpr base, CohClass by) {
    return BundleExpr(bundle::Twist{std::make_shared<const BundleExpr>(std::move(base)), std::move(by)});
  }
  static BundleExpr dual(BundleExpr base) {
    return BundleExpr(bundle::Dual{std::make_shared<const BundleExpr>(std::move(base))});
  }

  const Node& node() const noexcept { return node_; }

  int rank() const {
    return std::visit(
        [](const auto& n) -> int {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, bundle::Line>) {
            return 1;
          } else if constexpr (std::is_same_v<T, bundle::Sum>) {
            int r = 0;
            for (const auto& s : n.summands) r += s.rank();
            return r;
          } else {
            return n.base->rank();
          }
        },
        node_);
  }

 private:
  explicit BundleExpr(Node n) : node_(std::move(n)) {}
  Node node_;
};

/// Rank and Chern numbers of a bundle. c2 lives in the one-dimensional H^4
/// and is kept as its value on X.
struct ChernData {
  int rank = 0;
  CohClass c1;
  Rational c2_value = 0;
  Rational c1_sq_value = 0;

  friend bool operator==(const ChernData&, const ChernData&) = default;
};

namespace detail {

inline void require_divisor(const CohClass& c, const SurfaceRing& ring) {
  if (c.deg2.size() != ring.rank()) throw InvalidInput("divisor class does not belong to the ring");
  if (!c.is_divisor()) throw InvalidInput("line bundle class must be concentrated in degree 2");
}

inline ChernData finish(int rank, CohClass c1, Rational c2, const SurfaceRing& ring) {
  Rational c1sq = intersection_number(c1, c1, ring);
  return ChernData{rank, std::move(c1), std::move(c2), std::move(c1sq)};
}

}  // namespace detail

/// Total Chern class of a bundle expression, truncated at degree 4.
inline ChernData chern_of(const BundleExpr& expr, const SurfaceRing& ring) {
  return std::visit(
      [&](const auto& n) -> ChernData {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, bundle::Line>) {
          detail::require_divisor(n.c1, ring);
          return detail::finish(1, n.c1, 0, ring);
        } else if constexpr (std::is_same_v<T, bundle::Sum>) {
          if (n.summands.empty()) throw InvalidInput("direct sum with no summands");
          ChernData acc = chern_of(n.summands.front(), ring);
          for (std::size_t i = 1; i < n.summands.size(); ++i) {
            ChernData s = chern_of(n.summands[i], ring);
            // c(A+B) = c(A) c(B): c2 picks up c1(A).c1(B).
            Rational c2 = acc.c2_value + s.c2_value + intersection_number(acc.c1, s.c1, ring);
            acc = detail::finish(acc.rank + s.rank, acc.c1 + s.c1, std::move(c2), ring);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, bundle::Twist>) {
          detail::require_divisor(n.by, ring);
          ChernData e = chern_of(*n.base, ring);
          const Rational r = e.rank;
          Rational c2 = e.c2_value + (r - 1) * intersection_number(e.c1, n.by, ring) +
                        r * (r - 1) / 2 * intersection_number(n.by, n.by, ring);
          return detail::finish(e.rank, e.c1 + r * n.by, std::move(c2), ring);
        } else {
          ChernData e = chern_of(*n.base, ring);
          return detail::finish(e.rank, -e.c1, e.c2_value, ring);
        }
      },
      expr.node());
}

/// Intersection number of each summand class with the polarization.
inline std::vector<Rational> split_slopes(const std::vector<CohClass>& summands, const CohClass& polarization,
                                          const SurfaceRing& ring) {
  detail::require_divisor(polarization, ring);
  bool nonzero = false;
  for (const auto& x : polarization.deg2) nonzero = nonzero || x != 0;
  if (!nonzero) throw InvalidInput("polarization class must be nonzero");
  std::vector<Rational> out;
  out.reserve(summands.size());
  for (const auto& s : summands) {
    detail::require_divisor(s, ring);
    out.push_back(intersection_number(s, polarization, ring));
  }
  return out;
}

/// A direct sum of line bundles is semistable w.r.t. the polarization iff
/// every summand has the same slope.
inline bool is_semistable_split(const std::vector<Rational>& slopes) {
  if (slopes.empty()) return true;
  for (const auto& s : slopes)
    if (s != slopes.front()) return false;
  return true;
}

inline bool is_semistable_split(const std::vector<CohClass>& summands, const CohClass& polarization,
                                const SurfaceRing& ring) {
  return is_semistable_split(split_slopes(summands, polarization, ring));
}

/// Every supported expression splits as a sum of line bundles; returns the
/// summand classes in tree order.
inline std::vector<CohClass> split_line_classes(const BundleExpr& expr) {
  return std::visit(
      [](const auto& n) -> std::vector<CohClass> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, bundle::Line>) {
          return std::vector<CohClass>{n.c1};
        } else if constexpr (std::is_same_v<T, bundle::Sum>) {
          std::vector<CohClass> out;
          for (const auto& s : n.summands) {
            auto part = split_line_classes(s);
            out.insert(out.end(), part.begin(), part.end());
          }
          return out;
        } else if constexpr (std::is_same_v<T, bundle::Twist>) {
          auto part = split_line_classes(*n.base);
          for (auto& c : part) c += n.by;
          return part;
        } else {
          auto part = split_line_classes(*n.base);
          for (auto& c : part) c = -c;
          return part;
        }
      },
      expr.node());
}

}  // namespace ample
