#include <gtest/gtest.h>

#include "ample/pointwise/lagrange.hpp"

using namespace ample;
using namespace ample::pointwise;

TEST(Lagrange, EqualSplitWhenBVanishes) {
  for (int r = 2; r <= 8; ++r)
    for (double mu : {-1.5, 0.0, 0.3, 1.0, 2.0}) {
      const double x = (1 - mu) / (r - 1);
      const double expect = (1 - mu) * (2.0 / r - x);
      EXPECT_NEAR(lagrange_max(r, mu, Eigen::VectorXd::Zero(r)), expect, 1e-14);
    }
}

TEST(Lagrange, RankTwoHasOneFeasiblePoint) {
  // The constraint pins x_2 = 1 - mu.
  Eigen::VectorXd b(2);
  b << 0.13, -0.13;
  const double mu = 0.4;
  EXPECT_NEAR(lagrange_maximizer(2, mu, b)(0), 1 - mu, 1e-15);
  EXPECT_NEAR(lagrange_max(2, mu, b), (1 - mu) * (1 + b(1) - (1 - mu)), 1e-15);
}

TEST(Lagrange, MaximizerIsFeasibleAndLocallyOptimal) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 3 + trial % 6;
    const double mu = 2 * rng.symmetric();
    const Eigen::VectorXd b = sample_trace_free_diag(r, 0.2, rng);
    const Eigen::VectorXd x = lagrange_maximizer(r, mu, b);
    EXPECT_NEAR(x.sum(), 1 - mu, 1e-13);
    const double f = lagrange_objective(r, b, x);
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd dx(r - 1);
      for (int i = 0; i < r - 1; ++i) dx(i) = 0.1 * rng.symmetric();
      dx.array() -= dx.mean();
      EXPECT_LE(lagrange_objective(r, b, x + dx), f + 1e-14);
    }
  }
}

TEST(Lagrange, MatchesGridSearchAtRankThree) {
  // f on the line x_2 + x_3 = 1 - mu, scanned directly.
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const double mu = 2 * rng.symmetric();
    const Eigen::VectorXd b = sample_trace_free_diag(3, 0.2, rng);
    double best = -1e300;
    for (int k = -200000; k <= 200000; ++k) {
      const double t = (1 - mu) / 2 + 1e-5 * k;
      const double f = t * (2.0 / 3 + b(1) - t) + (1 - mu - t) * (2.0 / 3 + b(2) - (1 - mu - t));
      best = std::max(best, f);
    }
    EXPECT_NEAR(lagrange_max(3, mu, b), best, 1e-9);
  }
}

TEST(Lagrange, ProjectedGradientAgreesWithClosedForm) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 2 + trial % 7;
    const double mu = 2 * rng.symmetric();
    const Eigen::VectorXd b = sample_trace_free_diag(r, 0.2, rng);
    const LagrangeNumeric num = lagrange_numeric(r, mu, b);
    EXPECT_TRUE(num.converged);
    EXPECT_NEAR(num.value, lagrange_max(r, mu, b), 1e-12);
    EXPECT_LT((num.x - lagrange_maximizer(r, mu, b)).norm(), 1e-12);
  }
}

TEST(Lagrange, CheckRunIsDeterministicAndAgrees) {
  LagrangeCheckConfig cfg;
  cfg.samples = 300;
  cfg.seed = 12;
  const LagrangeCheckResult a = run_lagrange_check(cfg), b = run_lagrange_check(cfg);
  EXPECT_TRUE(a.agrees);
  EXPECT_EQ(a.unconverged, 0);
  EXPECT_EQ(a.max_abs_diff, b.max_abs_diff);
  EXPECT_EQ(a.worst.r, b.worst.r);
  EXPECT_LE(a.worst.b_diag.cwiseAbs().maxCoeff(), 0.2);
}

TEST(Lagrange, SampledDiagonalsAreTraceFreeAndBounded) {
  Rng rng(6);
  for (int k = 0; k < 200; ++k) {
    const Eigen::VectorXd d = sample_trace_free_diag(2 + k % 7, 0.2, rng);
    EXPECT_LE(std::abs(d.sum()), 1e-15);
    EXPECT_LE(d.cwiseAbs().maxCoeff(), 0.2);
  }
}

TEST(Lagrange, RejectsBadInputs) {
  EXPECT_THROW(lagrange_max(1, 0, Eigen::VectorXd::Zero(1)), InvalidInput);
  EXPECT_THROW(lagrange_max(3, 0, Eigen::VectorXd::Zero(2)), InvalidInput);
  Eigen::VectorXd b(3);
  b << 0.1, 0.1, 0.1;
  EXPECT_THROW(lagrange_max(3, 0, b), InvalidInput);
  LagrangeCheckConfig cfg;
  cfg.r_min = 1;
  EXPECT_THROW(run_lagrange_check(cfg), InvalidInput);
}
