#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "ample/errors.hpp"

namespace ample {

/// Arbitrary precision rational; every intersection number in the library
/// lives here so equality-case checks are exact.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Parses "p/q", "p" or "-p/q" (whitespace not allowed). The result is
/// normalized, so "4/2" == "2".
inline Rational parse_rational(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!is_int(num)) throw InvalidInput("malformed rational '" + std::string(text) + "'");
  if (num.front() == '+') num.remove_prefix(1);
  Integer p{std::string(num)};
  if (slash == std::string_view::npos) return Rational(p);
  std::string_view den = text.substr(slash + 1);
  if (!is_int(den) || den.front() == '-' || den.front() == '+')
    throw InvalidInput("malformed rational '" + std::string(text) + "'");
  Integer q{std::string(den)};
  if (q == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  return Rational(p, q);
}

/// "p/q" in lowest terms, or "p" when the denominator is 1.
inline std::string to_string(const Rational& x) {
  const Integer& p = boost::multiprecision::numerator(x);
  const Integer& q = boost::multiprecision::denominator(x);
  if (q == 1) return p.str();
  return p.str() + "/" + q.str();
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace ample
