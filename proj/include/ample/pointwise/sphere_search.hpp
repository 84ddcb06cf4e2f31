#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "ample/pointwise/curvature.hpp"
#include "ample/seed.hpp"

namespace ample::pointwise {

struct SphereSearchOptions {
  int restarts = 5;
  double tol = 1e-9;  // on the norm of the Riemannian gradient
  int max_iterations = 500;
  std::uint64_t seed = 0;
};

struct SphereSearchResult {
  Eigen::VectorXcd v;
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

/// Random unit vector in C^r, uniform on the sphere.
inline Eigen::VectorXcd random_unit_vector(int r, Rng& rng) {
  Eigen::VectorXcd v(r);
  for (int i = 0; i < r; ++i) v(i) = cplx(rng.normal(), rng.normal());
  return v.normalized();
}

/// Multi-start Riemannian conjugate gradient (Polak-Ribiere+ with Powell
/// restarts, Armijo line search with quadratic interpolation, tangent
/// projection as vector transport) on the unit sphere of C^r.
///
/// `objective(v, grad)` returns f(v) for unit v and writes the Wirtinger
/// gradient df/dvbar into `grad`. f must be invariant under v -> c v, so
/// the gradient is tangent up to the radial component removed here.
/// Start k depends only on (seed, k), which makes results with more
/// restarts a minimum over a superset.
template <class Objective>
SphereSearchResult minimize_on_sphere(int r, Objective&& objective, const SphereSearchOptions& opt) {
  SphereSearchResult best;
  best.v = Eigen::VectorXcd::Zero(r);
  Eigen::VectorXcd grad(r), trial_grad(r), alt_grad(r), dir(r), prev_grad(r);
  auto tangent = [](const Eigen::VectorXcd& v, Eigen::VectorXcd& g) { g -= v * v.dot(g).real(); };
  for (int k = 0; k < std::max(opt.restarts, 1); ++k) {
    Rng rng(sub_seed(opt.seed, static_cast<std::uint64_t>(k)));
    Eigen::VectorXcd v = random_unit_vector(r, rng);
    double f = objective(v, grad);
    tangent(v, grad);
    dir = -grad;
    double step = 1.0;
    bool converged = false;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
      if (grad.norm() < opt.tol) {
        converged = true;
        break;
      }
      // Real directional derivative of f along dir is 2 Re<grad, dir>.
      double slope = 2.0 * grad.dot(dir).real();
      if (slope >= 0) {
        dir = -grad;
        slope = -2.0 * grad.squaredNorm();
      }
      double t = std::min(step * 2.0, 1e3);
      bool moved = false;
      while (t > 1e-14) {
        Eigen::VectorXcd cand = (v + t * dir).normalized();
        double fc = objective(cand, trial_grad);
        // Parabola through f(0), f'(0) and f(t); its vertex is tq.
        const double curv = fc - f - slope * t;
        const double tq = curv > 0 ? -slope * t * t / (2.0 * curv) : 0.0;
        if (fc <= f + 1e-4 * t * slope) {
          // Accepted, but the step may have jumped across the minimum;
          // the vertex is then much better and costs one evaluation.
          if (tq > 1e-14 && tq < 0.9 * t) {
            Eigen::VectorXcd alt = (v + tq * dir).normalized();
            const double fa = objective(alt, alt_grad);
            if (fa < fc) {
              cand = std::move(alt);
              fc = fa;
              trial_grad.swap(alt_grad);
              t = tq;
            }
          }
          v = std::move(cand);
          f = fc;
          step = t;
          moved = true;
          break;
        }
        t = curv > 0 ? std::clamp(tq, 0.1 * t, 0.5 * t) : 0.5 * t;
      }
      if (!moved) {
        // No descent at machine resolution: stationary for our purposes.
        converged = true;
        break;
      }
      prev_grad = grad;
      grad = trial_grad;
      tangent(v, grad);
      tangent(v, dir);
      tangent(v, prev_grad);
      // Powell restart: successive gradients far from orthogonal mean the
      // conjugacy has been lost (typically after jumping across a minimum).
      double beta = std::max(0.0, grad.dot(grad - prev_grad).real() / prev_grad.squaredNorm());
      if (std::abs(grad.dot(prev_grad).real()) >= 0.2 * grad.squaredNorm()) beta = 0.0;
      dir = -grad + beta * dir;
    }
    if (f < best.value) {
      best.v = v;
      best.value = f;
      best.converged = converged;
      best.iterations = it;
    }
  }
  return best;
}

}  // namespace ample::pointwise
