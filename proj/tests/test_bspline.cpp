#include <gtest/gtest.h>

#include "frecl/bspline.hpp"
#include "oracles.hpp"

using namespace frecl;

TEST(BSpline, MatchesRecursionOracle) {
  for (int order : {1, 2, 3, 4}) {
    for (int count : {order, order + 1, 7, 12}) {
      const TimeGrid grid = TimeGrid::uniform(1.0, 24.0, 24);
      const BSplineBasis b(grid, count, order);
      EXPECT_LT((b.eval() - oracle::basis_matrix(grid.points(), count, order)).cwiseAbs().maxCoeff(), 1e-12)
          << "order " << order << " count " << count;
    }
  }
}

TEST(BSpline, PartitionOfUnityAndNonNegativity) {
  const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 57);
  const BSplineBasis b = build_basis(grid);
  EXPECT_EQ(b.count(), 12);
  EXPECT_EQ(b.order(), 4);
  EXPECT_LT((b.eval().rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_GE(b.eval().minCoeff(), 0.0);
}

TEST(BSpline, LocalSupport) {
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 200);
  const BSplineBasis b(grid, 12, 4);
  for (Eigen::Index r = 0; r < grid.size(); ++r) EXPECT_LE((b.eval().row(r).array() > 0.0).count(), 4);
}

TEST(BSpline, ClampedEnds) {
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 9);
  const BSplineBasis b(grid, 6, 4);
  EXPECT_DOUBLE_EQ(b.eval()(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(b.eval()(8, 5), 1.0);
  EXPECT_EQ(b.knots().size(), 10);
}

TEST(BSpline, EvaluateAtOffGridPoints) {
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 9);
  const BSplineBasis b(grid, 6, 3);
  Vector at(3);
  at << 0.05, 0.5, 1.0;
  const auto kn = oracle::clamped_knots(0.0, 1.0, 6, 3);
  const Matrix got = b.evaluate(at);
  for (Eigen::Index r = 0; r < 3; ++r)
    for (int a = 0; a < 6; ++a) EXPECT_NEAR(got(r, a), oracle::bspline(kn, a, 3, at(r)), 1e-12);
}

TEST(BSpline, RejectsInvalidSizes) {
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 9);
  EXPECT_THROW(BSplineBasis(grid, 3, 4), InputError);
  EXPECT_THROW(BSplineBasis(grid, 3, 0), InputError);
}

TEST(SecondDifference, QuadraticFormOfDifferences) {
  const Matrix p = second_difference_penalty(5);
  Vector c(5);
  c << 1.0, 4.0, 2.0, -1.0, 3.0;
  double direct = 0.0;
  for (int i = 0; i + 2 < 5; ++i) {
    const double d2 = c(i) - 2 * c(i + 1) + c(i + 2);
    direct += d2 * d2;
  }
  EXPECT_NEAR(c.dot(p * c), direct, 1e-12);
  // linear sequences lie in the null space
  Vector lin(5);
  lin << 1, 2, 3, 4, 5;
  EXPECT_LT((p * lin).norm(), 1e-12);
  EXPECT_EQ(second_difference_penalty(2).norm(), 0.0);
}
