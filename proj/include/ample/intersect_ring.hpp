#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ample/errors.hpp"
#include "ample/rational.hpp"

namespace ample {

/// Even rational cohomology of a compact complex surface, presented by a
/// divisor basis and its intersection matrix (values on the fundamental
/// class). Odd cohomology and torsion play no role and are not modelled.
class SurfaceRing {
 public:
  SurfaceRing(std::vector<std::string> basis_names, std::vector<std::vector<Rational>> pairing)
      : names_(std::move(basis_names)), pairing_(std::move(pairing)) {
    const std::size_t k = names_.size();
    if (k == 0) throw InvalidInput("surface ring needs at least one basis divisor");
    std::set<std::string> seen;
    for (const auto& n : names_) {
      if (n.empty()) throw InvalidInput("basis divisor names must be nonempty");
      if (!seen.insert(n).second) throw InvalidInput("duplicate basis divisor '" + n + "'");
    }
    if (pairing_.size() != k) throw InvalidInput("pairing must be a square matrix matching the basis");
    for (const auto& row : pairing_)
      if (row.size() != k) throw InvalidInput("pairing must be a square matrix matching the basis");
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (pairing_[i][j] != pairing_[j][i])
          throw InvalidInput("pairing is not symmetric at (" + names_[i] + ", " + names_[j] + ")");
  }

  std::size_t rank() const noexcept { return names_.size(); }
  const std::vector<std::string>& basis_names() const noexcept { return names_; }
  const std::vector<std::vector<Rational>>& pairing() const noexcept { return pairing_; }
  const Rational& pairing(std::size_t i, std::size_t j) const { return pairing_.at(i).at(j); }

  /// Index of a basis divisor by name; throws InvalidInput when absent.
  std::size_t index_of(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw InvalidInput("unknown basis divisor '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
  }

  /// Bilinear form x^T P y on divisor coordinates.
  Rational intersect(const std::vector<Rational>& x, const std::vector<Rational>& y) const {
    if (x.size() != rank() || y.size() != rank())
      throw InvalidInput("divisor coordinate vector does not match ring dimension");
    Rational acc = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < rank(); ++j)
        if (y[j] != 0) acc += x[i] * pairing_[i][j] * y[j];
    }
    return acc;
  }

  friend bool operator==(const SurfaceRing&, const SurfaceRing&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<Rational>> pairing_;
};

/// Graded element deg0 + deg2 + deg4 of a SurfaceRing. deg4 is the
/// coefficient of the point class.
struct CohClass {
  Rational deg0 = 0;
  std::vector<Rational> deg2;
  Rational deg4 = 0;

  static CohClass unit(std::size_t k) { return CohClass{1, std::vector<Rational>(k), 0}; }
  static CohClass zero(std::size_t k) { return CohClass{0, std::vector<Rational>(k), 0}; }
  static CohClass divisor(std::vector<Rational> coords) { return CohClass{0, std::move(coords), 0}; }
  static CohClass point(std::size_t k, Rational value) {
    return CohClass{0, std::vector<Rational>(k), std::move(value)};
  }
  /// The basis divisor at `index` (coefficient 1, everything else zero).
  static CohClass basis(std::size_t k, std::size_t index) {
    CohClass c = zero(k);
    c.deg2.at(index) = 1;
    return c;
  }

  bool is_divisor() const { return deg0 == 0 && deg4 == 0; }

  CohClass& operator+=(const CohClass& o) {
    if (o.deg2.size() != deg2.size()) throw InvalidInput("class dimension mismatch in addition");
    deg0 += o.deg0;
    for (std::size_t i = 0; i < deg2.size(); ++i) deg2[i] += o.deg2[i];
    deg4 += o.deg4;
    return *this;
  }
  CohClass& operator-=(const CohClass& o) { return *this += o * Rational(-1); }
  CohClass& operator*=(const Rational& s) {
    deg0 *= s;
    for (auto& x : deg2) x *= s;
    deg4 *= s;
    return *this;
  }

  friend CohClass operator+(CohClass a, const CohClass& b) { return a += b; }
  friend CohClass operator-(CohClass a, const CohClass& b) { return a -= b; }
  friend CohClass operator-(CohClass a) { return a *= Rational(-1); }
  friend CohClass operator*(CohClass a, const Rational& s) { return a *= s; }
  friend CohClass operator*(const Rational& s, CohClass a) { return a *= s; }

  friend bool operator==(const CohClass&, const CohClass&) = default;
};

/// Cup product. Anything beyond real degree 4 vanishes on a surface.
inline CohClass ring_mul(const CohClass& a, const CohClass& b, const SurfaceRing& ring) {
  const std::size_t k = ring.rank();
  if (a.deg2.size() != k || b.deg2.size() != k)
    throw InvalidInput("class dimension does not match the surface ring");
  CohClass out = CohClass::zero(k);
  out.deg0 = a.deg0 * b.deg0;
  for (std::size_t i = 0; i < k; ++i) out.deg2[i] = a.deg0 * b.deg2[i] + b.deg0 * a.deg2[i];
  out.deg4 = a.deg0 * b.deg4 + b.deg0 * a.deg4 + ring.intersect(a.deg2, b.deg2);
  return out;
}

/// Intersection number against the fundamental class: the point-class
/// coefficient.
inline Rational evaluate_on_x(const CohClass& c) { return c.deg4; }

/// (a.b).X for two divisor classes.
inline Rational intersection_number(const CohClass& a, const CohClass& b, const SurfaceRing& ring) {
  return evaluate_on_x(ring_mul(a, b, ring));
}

}  // namespace ample
