#include <gtest/gtest.h>

#include "ample/pointwise/lemma.hpp"
#include "oracles.hpp"

using namespace ample;
using namespace ample::pointwise;

namespace {

Eigen::VectorXcd random_vector(int r, Rng& rng) {
  Eigen::VectorXcd v(r);
  for (int i = 0; i < r; ++i) v(i) = cplx(rng.symmetric(), rng.symmetric());
  return v;
}

// Theta = omega (x) (I/r + B/2) with B = eps (I - J): every entry of B has
// modulus at most eps, but <v, B v> = -(r-1) eps for v = (1, ..., 1).
PointCurvature constant_offdiagonal(int r, double eps) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(r, r);
  const Eigen::MatrixXcd b = eps * (id - Eigen::MatrixXcd::Ones(r, r));
  return oracle::scalar_type(id / double(r) + 0.5 * b, eps);
}

}  // namespace

TEST(LemmaConstants, StatedAndProofLineErrorTermsAgree) {
  for (int r = 2; r <= 12; ++r)
    for (double eps : {0.0, 1e-3, 0.01, 0.1, 0.5, 1.0}) {
      const LemmaConstants k = LemmaConstants::for_rank(r, eps);
      EXPECT_NEAR(k.error_density, LemmaConstants::proof_line_error(r, eps), 1e-14 * (1 + k.error_density));
      EXPECT_NEAR(k.lubke, 2.0 * r * (r - 1) / (r * r - 2 * r + 2), 1e-15);
    }
}

TEST(LemmaGap, ZeroAtProjectiveFlatness) {
  Rng rng(1);
  for (int r = 2; r <= 8; ++r) {
    const PointCurvature pc = projectively_flat(r);
    for (int k = 0; k < 50; ++k) EXPECT_LE(std::abs(lemma_gap(pc, random_vector(r, rng)).gap), 1e-12);
  }
}

TEST(LemmaGap, FlatWithPositiveEpsilonLeavesTheErrorTerm) {
  Rng rng(2);
  const PointCurvature pc = projectively_flat(4, 0.1);
  const double expect = LemmaConstants::for_rank(4, 0.1).error_density;
  EXPECT_NEAR(lemma_gap(pc, random_vector(4, rng)).gap, expect, 1e-12);
}

TEST(LemmaGap, MatchesIndependentEvaluation) {
  Rng rng(3);
  for (int r = 2; r <= 6; ++r)
    for (std::uint64_t s = 0; s < 40; ++s) {
      const PointCurvature pc = sample_curvature(r, 0.05, sub_seed(31, s));
      const Eigen::VectorXcd v = random_vector(r, rng);
      EXPECT_NEAR(lemma_gap(pc, v).gap, oracle::lemma_gap(pc, v), 1e-10);
    }
}

TEST(LemmaGap, ScaleAndPhaseInvariant) {
  Rng rng(4);
  const PointCurvature pc = sample_curvature(3, 0.1, 77);
  const Eigen::VectorXcd v = random_vector(3, rng);
  const double g = lemma_gap(pc, v).gap;
  EXPECT_NEAR(lemma_gap(pc, 5.0 * v).gap, g, 1e-12);
  EXPECT_NEAR(lemma_gap(pc, std::polar(2.0, 0.7) * v).gap, g, 1e-12);
}

TEST(LemmaGap, UnitaryFrameInvariance) {
  Rng rng(5);
  for (int r = 2; r <= 6; ++r)
    for (int k = 0; k < 20; ++k) {
      const PointCurvature pc = sample_curvature(r, 0.1, sub_seed(55, k));
      const Eigen::MatrixXcd u = random_unitary(r, rng);
      const Eigen::VectorXcd v = random_vector(r, rng);
      const LemmaGapResult a = lemma_gap(pc, v);
      const LemmaGapResult b = lemma_gap(change_frame(pc, u), u.adjoint() * v);
      EXPECT_NEAR(a.gap, b.gap, 1e-8);
      EXPECT_LT(std::abs(a.b_along_v - b.b_along_v), 1e-12);
    }
}

TEST(LemmaGap, RejectsBadVectors) {
  const PointCurvature pc = projectively_flat(3);
  EXPECT_THROW(lemma_gap(pc, Eigen::VectorXcd::Ones(2)), InvalidInput);
  EXPECT_THROW(lemma_gap(pc, Eigen::VectorXcd::Zero(3)), InvalidInput);
}

TEST(LemmaGap, NonnegativeAtUnperturbedFlatSamples) {
  // eps = 0 sampled curvatures: the bound is an honest inequality.
  Rng rng(6);
  for (int r = 2; r <= 5; ++r)
    for (std::uint64_t s = 0; s < 200; ++s) {
      const PointCurvature pc = sample_curvature(r, 0.0, sub_seed(66, s));
      EXPECT_GE(lemma_gap(pc, random_vector(r, rng)).gap, -1e-9);
    }
}

TEST(MinGap, MatchesGridOracleAtRankTwo) {
  for (double eps : {0.0, 0.1}) {
    for (std::uint64_t s = 0; s < 6; ++s) {
      const PointCurvature pc = sample_curvature(2, eps, sub_seed(200, s));
      const MinGapResult m = min_gap_over_v(pc, 5, 1e-12);
      const double grid = oracle::min_gap_grid_rank2(pc);
      EXPECT_TRUE(m.converged);
      EXPECT_LE(m.at_min.gap, grid + 1e-9);
      EXPECT_NEAR(m.at_min.gap, grid, 1e-3);
    }
  }
}

TEST(MinGap, NeverAboveRandomVectors) {
  Rng rng(7);
  for (int r = 2; r <= 5; ++r) {
    const PointCurvature pc = sample_curvature(r, 0.1, 300 + r);
    const double m = min_gap_over_v(pc, 5, 1e-10).at_min.gap;
    for (int k = 0; k < 200; ++k) EXPECT_LE(m, lemma_gap(pc, random_vector(r, rng)).gap + 1e-9);
  }
}

TEST(MinGap, MoreRestartsNeverWorse) {
  for (int r = 2; r <= 5; ++r) {
    const PointCurvature pc = sample_curvature(r, 0.1, 400 + r);
    EXPECT_LE(min_gap_over_v(pc, 12, 1e-10).at_min.gap, min_gap_over_v(pc, 3, 1e-10).at_min.gap);
  }
}

TEST(MinGap, Deterministic) {
  const PointCurvature pc = sample_curvature(4, 0.01, 500);
  const MinGapResult a = min_gap_over_v(pc, 5, 1e-10), b = min_gap_over_v(pc, 5, 1e-10);
  EXPECT_EQ(a.at_min.gap, b.at_min.gap);
  EXPECT_EQ(a.at_min.v, b.at_min.v);
}

TEST(MinGap, RejectsBadOptions) {
  const PointCurvature pc = projectively_flat(2);
  EXPECT_THROW(min_gap_over_v(pc, 0, 1e-9), InvalidInput);
  EXPECT_THROW(min_gap_over_v(pc, 1, 0.0), InvalidInput);
}

// The bound fails for vectors along which B exceeds the entrywise bound.
TEST(PointwiseBound, FailsWhenBIsLargeAlongV) {
  for (int r = 3; r <= 6; ++r) {
    const double eps = 0.1;
    const PointCurvature pc = constant_offdiagonal(r, eps);
    ASSERT_LE(residuals(pc).max(), 1e-15);
    const Eigen::VectorXcd v = Eigen::VectorXcd::Ones(r);
    const LemmaGapResult g = lemma_gap(pc, v);

    // Closed form: <v,Theta v> = s omega with s = 1/r - (r-1) eps/2, and
    // c2 = 1 - tr(A^2) with tr(A^2) = 1/r + r(r-1) eps^2/4.
    const double d = r * r - 2.0 * r + 2, kappa = 2.0 * r * (r - 1) / d;
    const double s = 1.0 / r - (r - 1) * eps / 2;
    const double tr_a2 = 1.0 / r + r * (r - 1) * eps * eps / 4;
    const double lhs = 2.0 - kappa * (1.0 - tr_a2);
    const double rhs = r * r / d * 2.0 * s * s + LemmaConstants::for_rank(r, eps).error_density;
    EXPECT_NEAR(g.gap, rhs - lhs, 1e-12);
    EXPECT_NEAR(g.gap, oracle::lemma_gap(pc, v), 1e-12);
    EXPECT_LT(g.gap, -1e-3) << "r=" << r;
    EXPECT_NEAR(std::abs(g.b_along_v), (r - 1) * eps, 1e-12);
    EXPECT_LT(g.gap_proof_line, -1e-3);
  }
  EXPECT_NEAR(lemma_gap(constant_offdiagonal(3, 0.1), Eigen::VectorXcd::Ones(3)).gap, -0.096, 1e-12);
}

// Along a frame vector B_11 = 0, but the r(r-1) off-diagonal entries of
// size eps still lower c2 by r(r-1) eps^2 / 4 in total, which outgrows the
// error term once (r-1) eps (r^2-2r-1) > 4.
TEST(PointwiseBound, OffDiagonalEntriesAccumulate) {
  const double eps = 0.1;
  for (int r = 3; r <= 6; ++r) {
    const PointCurvature pc = constant_offdiagonal(r, eps);
    const double d = r * r - 2.0 * r + 2;
    const double expect = (2 * r * eps + r * (r - 1) * eps * eps * ((r + 1) - r * (r - 1)) / 2) / d;
    for (int i = 0; i < r; ++i) {
      const LemmaGapResult g = lemma_gap(pc, Eigen::VectorXcd::Unit(r, i));
      EXPECT_EQ(g.b_along_v, cplx(0.0));
      EXPECT_NEAR(g.gap, expect, 1e-12);
      EXPECT_NEAR(g.gap, oracle::lemma_gap(pc, Eigen::VectorXcd::Unit(r, i)), 1e-12);
    }
    const bool predicted_negative = (r - 1) * eps * (r * r - 2 * r - 1) > 4;
    EXPECT_EQ(expect < 0, predicted_negative) << "r=" << r;
  }
  EXPECT_GT(lemma_gap(constant_offdiagonal(4, eps), Eigen::VectorXcd::Unit(4, 0)).gap, 0);
  EXPECT_LT(lemma_gap(constant_offdiagonal(5, eps), Eigen::VectorXcd::Unit(5, 0)).gap, 0);
}

TEST(Griffiths, ProjectivelyFlatGivesOneOverR) {
  for (int r = 2; r <= 8; ++r) EXPECT_NEAR(griffiths_min(projectively_flat(r)).min_eigenvalue, 1.0 / r, 1e-12);
}

TEST(Griffiths, NegativeDiagonalEntryWitness) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = -0.5;
  a(1, 1) = 1.5;
  const PointCurvature pc = oracle::scalar_type(a, 2.0);
  ASSERT_LT(pc.block(0, 0)(0, 0).real(), 0);
  EXPECT_LT(min_eigenvalue(pair_form(pc, Eigen::VectorXcd::Unit(2, 0))), 0);
  EXPECT_LE(griffiths_min(pc).min_eigenvalue, -0.5 + 1e-12);
}

TEST(Griffiths, FrameInvariant) {
  Rng rng(9);
  for (int r = 2; r <= 5; ++r) {
    const PointCurvature pc = sample_curvature(r, 0.1, 600 + r);
    const PointCurvature q = change_frame(pc, random_unitary(r, rng));
    EXPECT_NEAR(griffiths_min(pc).min_eigenvalue, griffiths_min(q).min_eigenvalue, 1e-8);
  }
}

TEST(Griffiths, MatchesDualGridOracle) {
  for (int r = 2; r <= 4; ++r)
    for (std::uint64_t s = 0; s < 3; ++s) {
      const PointCurvature pc = sample_curvature(r, 0.1, sub_seed(700, s) + r);
      const double found = griffiths_min(pc).min_eigenvalue;
      const double grid = oracle::griffiths_min_dual(pc, 80);
      EXPECT_LE(found, grid + 1e-9);
      EXPECT_NEAR(found, grid, 5e-3);
    }
}

TEST(Griffiths, MinEigenvalueOfTwoByTwo) {
  Form11 g;
  g << 2.0, cplx(0.0, 1.0), cplx(0.0, -1.0), 2.0;
  Eigen::Vector2cd u;
  EXPECT_NEAR(min_eigenvalue(g, &u), 1.0, 1e-15);
  EXPECT_LT((g * u - u).norm(), 1e-14);
}
