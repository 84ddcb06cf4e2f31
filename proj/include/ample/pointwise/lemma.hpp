#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

#include "ample/errors.hpp"
#include "ample/pointwise/curvature.hpp"
#include "ample/pointwise/densities.hpp"
#include "ample/pointwise/sphere_search.hpp"

namespace ample::pointwise {

/// Constants of the pointwise bound
///   c1^2 - k c2 <= r^2/D (<v,Theta v>/|v|^2)^2 + (4r + r(r^2-1) eps) eps / (4D) omega^2
/// with D = r^2 - 2r + 2 and k = 2r(r-1)/D. Densities are against
/// sqrt(-1)dz1 dz1bar ^ sqrt(-1)dz2 dz2bar, so omega^2 has density 2.
struct LemmaConstants {
  double denom = 0;        // D
  double lubke = 0;        // k
  double square_weight = 0;  // r^2 / D
  double error_density = 0;  // stated error term, times 2

  static LemmaConstants for_rank(int r, double eps) {
    const double rr = r;
    LemmaConstants c;
    c.denom = rr * rr - 2 * rr + 2;
    c.lubke = 2 * rr * (rr - 1) / c.denom;
    c.square_weight = rr * rr / c.denom;
    c.error_density = (4 * rr + rr * (rr * rr - 1) * eps) / (4 * c.denom) * eps * 2.0;
    return c;
  }

  /// Error term as it appears in the last line of the argument,
  /// (r(r^2-1) eps^2 / 2 + 2 r eps) / D, evaluated independently.
  static double proof_line_error(int r, double eps) {
    const double rr = r;
    return (rr * (rr * rr - 1) * eps * eps / 2 + 2 * rr * eps) / (rr * rr - 2 * rr + 2);
  }
};

struct LemmaGapResult {
  double lhs_density = 0;
  double rhs_density = 0;
  double gap = 0;            // rhs - lhs
  double gap_proof_line = 0; // same with the proof-line error constant
  Eigen::VectorXcd v;
  /// <v, B v> / |v|^2: the (1,1) entry of B in a frame whose first vector
  /// is v/|v|. The argument needs its modulus <= epsilon.
  cplx b_along_v = 0;
};

namespace detail {

/// Lemma data that does not depend on v.
struct LemmaFixed {
  LemmaConstants k;
  double lhs = 0;
  double proof_error = 0;
};

inline LemmaFixed lemma_fixed(const PointCurvature& pc) {
  const ChernDensities cd = chern_densities(pc);
  LemmaFixed f;
  f.k = LemmaConstants::for_rank(pc.rank(), pc.epsilon());
  f.lhs = cd.c1sq - f.k.lubke * cd.c2;
  f.proof_error = LemmaConstants::proof_line_error(pc.rank(), pc.epsilon());
  return f;
}

inline LemmaGapResult finish_gap(const LemmaFixed& f, const PointCurvature& pc, const Eigen::VectorXcd& v) {
  const double n2 = v.squaredNorm();
  const Form11 g = pair_form(pc, v) / n2;
  const double sq = wedge_density(g, g).real();
  LemmaGapResult res;
  res.lhs_density = f.lhs;
  res.rhs_density = f.k.square_weight * sq + f.k.error_density;
  res.gap = res.rhs_density - res.lhs_density;
  res.gap_proof_line = f.k.square_weight * sq + f.proof_error - f.lhs;
  res.v = v;
  res.b_along_v = v.dot(pc.b() * v) / n2;
  return res;
}

}  // namespace detail

inline LemmaGapResult lemma_gap(const PointCurvature& pc, const Eigen::VectorXcd& v) {
  if (v.size() != pc.rank()) throw InvalidInput("vector length must equal the bundle rank");
  if (v.squaredNorm() == 0.0) throw InvalidInput("lemma_gap needs a nonzero vector");
  return detail::finish_gap(detail::lemma_fixed(pc), pc, v);
}

/// Wirtinger gradient pieces for f(v) = h(<v,Theta v>) on the unit sphere:
/// w[i] = sum_j Theta_i^j v_j, so d<v,Theta v>/dvbar_i = w[i].
inline void theta_times(const PointCurvature& pc, const Eigen::VectorXcd& v, std::vector<Form11>& w, Form11& g) {
  const int r = pc.rank();
  w.resize(static_cast<std::size_t>(r));
  g.setZero();
  for (int i = 0; i < r; ++i) {
    Form11 acc = Form11::Zero();
    for (int j = 0; j < r; ++j) acc += v(j) * pc.block(i, j);
    w[static_cast<std::size_t>(i)] = acc;
    g += std::conj(v(i)) * acc;
  }
}

struct MinGapResult {
  LemmaGapResult at_min;
  bool converged = false;
  int iterations = 0;
};

/// Adversarial search for the v minimizing the gap. The gap depends on v
/// only through det <v,Theta v>/|v|^4, which is what gets minimized.
inline MinGapResult min_gap_over_v(const PointCurvature& pc, int restarts, double tol, int max_iterations = 500) {
  if (restarts < 1) throw InvalidInput("restarts must be >= 1");
  if (!(tol > 0)) throw InvalidInput("tol must be positive");
  const detail::LemmaFixed fixed = detail::lemma_fixed(pc);
  std::vector<Form11> w;
  Form11 g;
  auto det_objective = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& grad) {
    theta_times(pc, v, w, g);
    const cplx det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    for (int i = 0; i < pc.rank(); ++i) {
      const Form11& d = w[static_cast<std::size_t>(i)];
      grad(i) = d(0, 0) * g(1, 1) + g(0, 0) * d(1, 1) - d(0, 1) * g(1, 0) - g(0, 1) * d(1, 0) -
                2.0 * det.real() * v(i);
    }
    return det.real();
  };
  SphereSearchOptions opt;
  opt.restarts = restarts;
  // tol is on the gap value. Near a nondegenerate minimum the value error
  // is quadratic in the gradient, so the gradient threshold is sqrt(tol),
  // rescaled because det enters the gap with weight 2 r^2 / D.
  opt.tol = std::sqrt(tol / (2.0 * fixed.k.square_weight));
  opt.max_iterations = max_iterations;
  opt.seed = sub_seed(pc.seed(), 0x6761705fULL);
  const SphereSearchResult s = minimize_on_sphere(pc.rank(), det_objective, opt);
  return {detail::finish_gap(fixed, pc, s.v), s.converged, s.iterations};
}

struct GriffithsResult {
  double min_eigenvalue = 0;
  Eigen::VectorXcd v;
  bool converged = false;
};

/// Smallest eigenvalue of the 2x2 Hermitian matrix of a (1,1)-form.
inline double min_eigenvalue(const Form11& g, Eigen::Vector2cd* eigvec = nullptr) {
  const double a = g(0, 0).real(), d = g(1, 1).real();
  const cplx b = g(0, 1);
  const double half_diff = 0.5 * (a - d);
  const double rad = std::sqrt(half_diff * half_diff + std::norm(b));
  const double lam = 0.5 * (a + d) - rad;
  if (eigvec) {
    // (G - lam) u = 0; pick the better-conditioned row.
    Eigen::Vector2cd u;
    if (std::abs(a - lam) >= std::abs(d - lam))
      u << -b, cplx(a - lam);
    else
      u << cplx(d - lam), -std::conj(b);
    if (u.norm() < 1e-300) u << 1.0, 0.0;
    *eigvec = u.normalized();
  }
  return lam;
}

/// Minimum over unit v of the smallest eigenvalue of <v, Theta v>.
/// Positive means Griffiths positive at the point, up to the search.
/// `tol` is on the eigenvalue; the gradient threshold is sqrt(tol).
inline GriffithsResult griffiths_min(const PointCurvature& pc, int restarts = 10, double tol = 1e-12,
                                     int max_iterations = 1000) {
  require_consistent(pc);
  std::vector<Form11> w;
  Form11 g;
  auto objective = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& grad) {
    theta_times(pc, v, w, g);
    Eigen::Vector2cd u;
    const double lam = min_eigenvalue(g, &u);
    for (int i = 0; i < pc.rank(); ++i)
      grad(i) = u.dot(w[static_cast<std::size_t>(i)] * u) - lam * v(i);
    return lam;
  };
  SphereSearchOptions opt;
  opt.restarts = restarts;
  opt.tol = std::sqrt(tol);
  opt.max_iterations = max_iterations;
  opt.seed = sub_seed(pc.seed(), 0x67726966ULL);
  const SphereSearchResult s = minimize_on_sphere(pc.rank(), objective, opt);
  return {s.value, s.v, s.converged};
}

}  // namespace ample::pointwise
