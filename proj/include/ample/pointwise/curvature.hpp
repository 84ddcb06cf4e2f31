#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ample/errors.hpp"
#include "ample/seed.hpp"

namespace ample::pointwise {

using cplx = std::complex<double>;

/// Coefficients of a (1,1)-form at a point: entry (a, b) multiplies
/// sqrt(-1) dz^a ^ dzbar^b.
using Form11 = Eigen::Matrix2cd;

/// Normalized Chern curvature (sqrt(-1)/2pi F) of a rank-r Hermitian
/// bundle at one point of a surface, in a unitary frame (metric = identity)
/// and coordinates where the Kahler form is sqrt(-1)(dz1 dz1bar + dz2 dz2bar).
///
/// Invariants checked by residuals():
///   Hermitian   (Theta_i^j)_{ab} = conj (Theta_j^i)_{ba}
///   trace       sum_i Theta_i^i = omega
///   HE          (Theta_i^j)_{11} + (Theta_i^j)_{22} = 2/r delta_ij + B_ij
///   B           Hermitian, trace free, |B_ij| <= epsilon
class PointCurvature {
 public:
  PointCurvature(int rank, double epsilon) : rank_(rank), epsilon_(epsilon) {
    if (rank < 2) throw InvalidInput("point curvature needs rank >= 2");
    if (!(epsilon >= 0.0)) throw InvalidInput("epsilon must be nonnegative");
    blocks_.assign(static_cast<std::size_t>(rank) * rank, Form11::Zero());
    b_ = Eigen::MatrixXcd::Zero(rank, rank);
  }

  int rank() const noexcept { return rank_; }
  double epsilon() const noexcept { return epsilon_; }
  std::uint64_t seed() const noexcept { return seed_; }
  void set_seed(std::uint64_t s) noexcept { seed_ = s; }

  /// Theta_i^j (row i, column j of the endomorphism).
  Form11& block(int i, int j) { return blocks_[index(i, j)]; }
  const Form11& block(int i, int j) const { return blocks_[index(i, j)]; }

  Eigen::MatrixXcd& b() noexcept { return b_; }
  const Eigen::MatrixXcd& b() const noexcept { return b_; }

  /// The r x r matrix (Theta_i^j)_{ab} for fixed coordinate indices.
  Eigen::MatrixXcd component(int a, int c) const {
    Eigen::MatrixXcd m(rank_, rank_);
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j) m(i, j) = block(i, j)(a, c);
    return m;
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(rank_) + static_cast<std::size_t>(j);
  }

  int rank_;
  double epsilon_;
  std::uint64_t seed_ = 0;
  std::vector<Form11> blocks_;
  Eigen::MatrixXcd b_;
};

struct Residuals {
  double hermitian = 0;
  double trace = 0;
  double he = 0;
  double b_trace = 0;
  double b_hermitian = 0;
  double b_bound = 0;  // max(|B_ij| - epsilon, 0)

  /// Constraints that survive a unitary frame change.
  double structural() const { return std::max({hermitian, trace, he, b_trace, b_hermitian}); }
  double max() const { return std::max(structural(), b_bound); }
};

inline Residuals residuals(const PointCurvature& pc) {
  const int r = pc.rank();
  Residuals res;
  Form11 tr = Form11::Zero();
  for (int i = 0; i < r; ++i) tr += pc.block(i, i);
  res.trace = (tr - Form11::Identity()).cwiseAbs().maxCoeff();
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const Form11& t = pc.block(i, j);
      res.hermitian = std::max(res.hermitian, (t - pc.block(j, i).adjoint()).cwiseAbs().maxCoeff());
      const cplx target = (i == j ? 2.0 / r : 0.0) + pc.b()(i, j);
      res.he = std::max(res.he, std::abs(t(0, 0) + t(1, 1) - target));
      res.b_bound = std::max(res.b_bound, std::abs(pc.b()(i, j)) - pc.epsilon());
    }
  }
  res.b_trace = std::abs(pc.b().trace());
  res.b_hermitian = (pc.b() - pc.b().adjoint()).cwiseAbs().maxCoeff();
  return res;
}

/// Throws InconsistentState when a structural residual exceeds `tol`. The
/// entrywise bound on B is frame dependent and is not checked here.
inline void require_consistent(const PointCurvature& pc, double tol = 1e-9) {
  const double worst = residuals(pc).structural();
  if (!(worst <= tol))
    throw InconsistentState("point curvature violates its constraints (max residual " +
                            std::to_string(worst) + ")");
}

enum class SamplerMode { random, projectively_flat };

/// Theta = (omega / r) Id, B = 0. The equality case of the pointwise bound.
inline PointCurvature projectively_flat(int r, double epsilon = 0.0) {
  PointCurvature pc(r, epsilon);
  for (int i = 0; i < r; ++i) pc.block(i, i) = Form11::Identity() / static_cast<double>(r);
  return pc;
}

/// Hermitian trace-free B with |B_ij| <= epsilon. Off-diagonal entries are
/// drawn on the unit disc and clipped to modulus epsilon; the diagonal is
/// drawn on [-1, 1], clipped, re-centred, and scaled back into the bound if
/// re-centring pushed an entry past epsilon.
inline Eigen::MatrixXcd sample_trace_free_b(int r, double epsilon, Rng& rng) {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(r, r);
  auto clip = [epsilon](cplx z) {
    const double m = std::abs(z);
    return m > epsilon ? z * (epsilon / m) : z;
  };
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      const cplx z = clip(rng.disc());
      b(i, j) = z;
      b(j, i) = std::conj(z);
    }
  }
  Eigen::VectorXd d(r);
  for (int i = 0; i < r; ++i) d(i) = std::clamp(rng.symmetric(), -epsilon, epsilon);
  d.array() -= d.mean();
  const double peak = d.cwiseAbs().maxCoeff();
  if (peak > epsilon) d *= epsilon / peak;
  for (int i = 0; i < r; ++i) b(i, i) = d(i);
  return b;
}

/// Draws a curvature satisfying every invariant by construction: the
/// constrained coefficients are solved for, never projected.
inline PointCurvature sample_curvature(int r, double epsilon, std::uint64_t seed,
                                       SamplerMode mode = SamplerMode::random) {
  if (r < 2) throw InvalidInput("sample_curvature needs rank >= 2");
  if (!(epsilon >= 0.0)) throw InvalidInput("epsilon must be nonnegative");
  if (mode == SamplerMode::projectively_flat) {
    PointCurvature pc = projectively_flat(r, epsilon);
    pc.set_seed(seed);
    return pc;
  }
  Rng rng(seed);
  PointCurvature pc(r, epsilon);
  pc.set_seed(seed);
  pc.b() = sample_trace_free_b(r, epsilon, rng);
  const Eigen::MatrixXcd& b = pc.b();

  // Bundle-diagonal blocks: (11) entries sum to 1 across i, (12) entries to 0.
  std::vector<double> t(r);
  std::vector<cplx> off(r);
  double t_sum = 0;
  cplx off_sum = 0;
  for (int i = 0; i + 1 < r; ++i) {
    t[i] = rng.symmetric();
    t_sum += t[i];
  }
  t[r - 1] = 1.0 - t_sum;
  for (int i = 0; i + 1 < r; ++i) {
    off[i] = rng.disc();
    off_sum += off[i];
  }
  off[r - 1] = -off_sum;
  for (int i = 0; i < r; ++i) {
    Form11& d = pc.block(i, i);
    d(0, 0) = t[i];
    d(1, 1) = 2.0 / r + b(i, i).real() - t[i];
    d(0, 1) = off[i];
    d(1, 0) = std::conj(off[i]);
  }

  // Bundle-off-diagonal blocks: (22) entry solves the HE constraint.
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      Form11& o = pc.block(i, j);
      o(0, 0) = rng.disc();
      o(0, 1) = rng.disc();
      o(1, 0) = rng.disc();
      o(1, 1) = b(i, j) - o(0, 0);
      pc.block(j, i) = o.adjoint();
    }
  }
  return pc;
}

/// Frame change e' = e U for unitary U: Theta' = U^* Theta U, B' = U^* B U.
/// Coefficient-wise in the coordinate indices. B' may violate the entrywise
/// bound, so epsilon is carried over unchanged and residuals() can flag it.
inline PointCurvature change_frame(const PointCurvature& pc, const Eigen::MatrixXcd& u) {
  const int r = pc.rank();
  if (u.rows() != r || u.cols() != r) throw InvalidInput("frame change must be r x r");
  PointCurvature out(r, pc.epsilon());
  out.set_seed(pc.seed());
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) {
      const Eigen::MatrixXcd m = u.adjoint() * pc.component(a, c) * u;
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) out.block(i, j)(a, c) = m(i, j);
    }
  }
  out.b() = u.adjoint() * pc.b() * u;
  return out;
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(int r, Rng& rng) {
  Eigen::MatrixXcd g(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) g(i, j) = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < r; ++j) {
    const cplx d = rmat(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace ample::pointwise
