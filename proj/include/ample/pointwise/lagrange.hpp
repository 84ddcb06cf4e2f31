#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <algorithm>

#include "ample/errors.hpp"
#include "ample/seed.hpp"

namespace ample::pointwise {

namespace detail {

inline void check_lagrange_inputs(int r, const Eigen::VectorXd& b_diag) {
  if (r < 2) throw InvalidInput("lagrange_max needs r >= 2 (the sum over i >= 2 is empty otherwise)");
  if (b_diag.size() != r) throw InvalidInput("B diagonal must have r entries");
  if (std::abs(b_diag.sum()) > 1e-9 * (1.0 + b_diag.cwiseAbs().sum()))
    throw InvalidInput("B diagonal must be trace free");
}

}  // namespace detail

/// f(x) = sum_{i>=2} x_i (2/r + B_i - x_i) for x indexed by i = 2..r
/// (x(0) is the i = 2 entry).
inline double lagrange_objective(int r, const Eigen::VectorXd& b_diag, const Eigen::VectorXd& x) {
  double f = 0;
  for (int i = 1; i < r; ++i) f += x(i - 1) * (2.0 / r + b_diag(i) - x(i - 1));
  return f;
}

/// Stationary point of f on sum x_i = 1 - mu:
/// x_i = (1-mu)/(r-1) + B_1/(2(r-1)) + B_i/2.
inline Eigen::VectorXd lagrange_maximizer(int r, double mu, const Eigen::VectorXd& b_diag) {
  detail::check_lagrange_inputs(r, b_diag);
  Eigen::VectorXd x(r - 1);
  for (int i = 1; i < r; ++i) x(i - 1) = (1.0 - mu) / (r - 1) + b_diag(0) / (2.0 * (r - 1)) + b_diag(i) / 2.0;
  return x;
}

/// Closed-form maximum of f subject to sum_{i>=2} x_i = 1 - mu.
inline double lagrange_max(int r, double mu, const Eigen::VectorXd& b_diag) {
  return lagrange_objective(r, b_diag, lagrange_maximizer(r, mu, b_diag));
}

struct LagrangeNumeric {
  double value = 0;
  Eigen::VectorXd x;
  int iterations = 0;
  bool converged = false;
};

/// Projected gradient ascent on the affine set sum x_i = 1 - mu, started
/// from the equal split. The objective's Hessian is -2 I, so the step
/// 1/4 contracts the error by half each iteration.
inline LagrangeNumeric lagrange_numeric(int r, double mu, const Eigen::VectorXd& b_diag, double tol = 1e-13,
                                        int max_iterations = 200) {
  detail::check_lagrange_inputs(r, b_diag);
  const int n = r - 1;
  LagrangeNumeric out;
  out.x = Eigen::VectorXd::Constant(n, (1.0 - mu) / n);
  for (; out.iterations < max_iterations; ++out.iterations) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = 2.0 / r + b_diag(i + 1) - 2.0 * out.x(i);
    g.array() -= g.mean();
    if (g.norm() < tol) {
      out.converged = true;
      break;
    }
    out.x += 0.25 * g;
  }
  out.value = lagrange_objective(r, b_diag, out.x);
  return out;
}

/// Trace-free real vector with entries in [-bound, bound].
inline Eigen::VectorXd sample_trace_free_diag(int r, double bound, Rng& rng) {
  Eigen::VectorXd d(r);
  for (int i = 0; i < r; ++i) d(i) = bound * rng.symmetric();
  d.array() -= d.mean();
  const double peak = d.cwiseAbs().maxCoeff();
  if (peak > bound) d *= bound / peak;
  return d;
}

struct LagrangeCheckConfig {
  std::int64_t samples = 1000;
  std::uint64_t seed = 0;
  int r_min = 2;
  int r_max = 8;
  double mu_max = 2.0;  // mu uniform on [-mu_max, mu_max]
  double b_max = 0.2;   // |B_i| <= b_max
  double tolerance = 1e-6;
};

struct LagrangeInstance {
  int r = 0;
  double mu = 0;
  Eigen::VectorXd b_diag;
  double closed_form = 0;
  double numeric = 0;
};

struct LagrangeCheckResult {
  std::int64_t samples = 0;
  double max_abs_diff = 0;
  std::int64_t unconverged = 0;
  LagrangeInstance worst;
  bool agrees = true;
};

/// Closed form vs projected gradient on random (r, mu, B) triples.
inline LagrangeCheckResult run_lagrange_check(const LagrangeCheckConfig& cfg) {
  if (cfg.r_min < 2 || cfg.r_max < cfg.r_min) throw InvalidInput("lagrange check needs 2 <= r_min <= r_max");
  if (cfg.samples < 1) throw InvalidInput("lagrange check needs at least one sample");
  LagrangeCheckResult out;
  out.samples = cfg.samples;
  out.max_abs_diff = -1;
  for (std::int64_t k = 0; k < cfg.samples; ++k) {
    Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    LagrangeInstance inst;
    inst.r = cfg.r_min + static_cast<int>(rng.unit() * (cfg.r_max - cfg.r_min + 1));
    inst.r = std::min(inst.r, cfg.r_max);
    inst.mu = cfg.mu_max * rng.symmetric();
    inst.b_diag = sample_trace_free_diag(inst.r, cfg.b_max, rng);
    inst.closed_form = lagrange_max(inst.r, inst.mu, inst.b_diag);
    const LagrangeNumeric num = lagrange_numeric(inst.r, inst.mu, inst.b_diag);
    inst.numeric = num.value;
    if (!num.converged) ++out.unconverged;
    const double diff = std::abs(inst.closed_form - inst.numeric);
    if (diff > out.max_abs_diff) {
      out.max_abs_diff = diff;
      out.worst = inst;
    }
  }
  out.agrees = out.max_abs_diff <= cfg.tolerance;
  return out;
}

}  // namespace ample::pointwise
