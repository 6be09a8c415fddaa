#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "frecl/fofr.hpp"
#include "frecl/frecl.hpp"
#include "frecl/metrics.hpp"
#include "frecl/simgen.hpp"

using namespace frecl;

TEST(TruePartition, NonEmptyAndDeterministic) {
  Rng a(1), b(1);
  const Partition p = draw_true_partition(500, 3, a);
  EXPECT_EQ(p.nonempty_count(), 3);
  EXPECT_EQ(p, draw_true_partition(500, 3, b));
  EXPECT_EQ(draw_true_partition(4, 4, a).nonempty_count(), 4);
  EXPECT_THROW(draw_true_partition(2, 3, a), InputError);
}

TEST(Predictors, ZeroVarianceGivesZeroCurves) {
  SimSpec spec;
  spec.m = 5;
  spec.predictor_variance = 0.0;
  for (const auto& x : sample_predictors(spec)) EXPECT_EQ(x.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Predictors, FourierMeanIsZero) {
  SimSpec spec;
  spec.m = 10000;
  spec.p = 1;
  spec.seed = 2;
  const CurveSet x = sample_predictors(spec).front();
  const Vector mean = x.values().colwise().mean().transpose();
  const Vector se = ((x.values().rowwise() - mean.transpose()).array().square().colwise().sum() / (10000.0 * 9999.0))
                        .sqrt()
                        .transpose();
  for (Eigen::Index q = 0; q < mean.size(); ++q) EXPECT_LT(std::abs(mean(q)), 3.0 * se(q) + 1e-12);
}

TEST(Predictors, FourierVarianceMatchesHarmonicWeights) {
  // Var X(t) = sum_h c / h^2 at every t.
  SimSpec spec;
  spec.m = 20000;
  spec.p = 1;
  spec.seed = 3;
  const CurveSet x = sample_predictors(spec).front();
  const double expected = 1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 16.0;
  const double var = x.values().array().square().mean();
  EXPECT_NEAR(var, expected, 0.03 * expected);
}

TEST(Predictors, ResamplePool) {
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 5);
  SimSpec spec;
  spec.m = 7;
  spec.p = 1;
  spec.source = PredictorSource::ResamplePool;
  spec.pool = {CurveSet(grid, Matrix::Constant(1, 5, 3.0))};
  const CurveSet x = sample_predictors(spec).front();
  EXPECT_EQ(x.rows(), 7);
  EXPECT_EQ(x.values(), Matrix::Constant(7, 5, 3.0));
  spec.pool = {CurveSet(grid, Matrix(0, 5))};
  EXPECT_THROW(sample_predictors(spec), InputError);
  spec.pool = {};
  EXPECT_THROW(sample_predictors(spec), InputError);
}

TEST(Ar1, DegenerateAndErrorCases) {
  Rng a(4);
  EXPECT_EQ(ar1_noise(10, 0.5, 0.0, a), Vector::Zero(10));
  EXPECT_THROW(ar1_noise(10, 1.0, 1.0, a), InputError);
  EXPECT_THROW(ar1_noise(10, -1.5, 1.0, a), InputError);
  // rho = 0 is white noise with the innovation variance
  const Vector e = ar1_noise(200000, 0.0, 2.0, a);
  EXPECT_NEAR(e.array().square().mean(), 2.0, 0.04);
  const Vector c = e.array() - e.mean();
  EXPECT_NEAR(c.head(c.size() - 1).dot(c.tail(c.size() - 1)) / c.squaredNorm(), 0.0, 0.01);
}

TEST(Ar1, LagOneAutocorrelation) {
  Rng rng(5);
  const Vector e = ar1_noise(1000000, 0.5, 0.1, rng);
  const Vector c = e.array() - e.mean();
  EXPECT_NEAR(c.head(c.size() - 1).dot(c.tail(c.size() - 1)) / c.squaredNorm(), 0.5, 0.01);
  EXPECT_NEAR(c.squaredNorm() / static_cast<double>(c.size()), 0.1 / 0.75, 0.02 * 0.1 / 0.75);
}

TEST(Generate, NoiseFreeEqualsDiscretizedModel) {
  SimSpec spec;
  spec.m = 40;
  spec.seed = 6;
  spec.noise.sigma2 = 0.0;
  const SimResult sim = generate(spec);
  EXPECT_EQ(sim.data.response().values(), sim.signal);
  const Vector& w = spec.grid.weights();
  for (Eigen::Index i = 0; i < 40; ++i) {
    const ClusterOperator& op = sim.beta.clusters[static_cast<std::size_t>(sim.truth.label(static_cast<std::size_t>(i)))];
    for (Eigen::Index r = 0; r < 24; ++r) {
      double v = op.intercept(r);
      for (std::size_t j = 0; j < op.surfaces.size(); ++j)
        for (Eigen::Index s = 0; s < 24; ++s) v += w(s) * op.surfaces[j](r, s) * sim.data.predictor(j).values()(i, s);
      EXPECT_NEAR(sim.signal(i, r), v, 1e-10);
    }
  }
}

TEST(Generate, ByteIdenticalForEqualSeeds) {
  SimSpec spec;
  spec.m = 30;
  spec.seed = 7;
  spec.noise.kind = NoiseKind::Ar1;
  spec.noise.sigma2 = 0.1;
  const SimResult a = generate(spec), b = generate(spec);
  EXPECT_EQ(a.data.response().values(), b.data.response().values());
  EXPECT_EQ(a.truth, b.truth);
  spec.seed = 8;
  EXPECT_NE(generate(spec).data.response().values(), a.data.response().values());
}

TEST(Generate, IidNoiseVariance) {
  SimSpec spec;
  spec.m = 5000;
  spec.seed = 9;
  spec.noise.sigma2 = 0.5;
  const SimResult sim = generate(spec);
  const Matrix e = sim.data.response().values() - sim.signal;
  EXPECT_NEAR(e.array().square().mean(), 0.5, 0.01);
}

TEST(Generate, SnrScalesNoise) {
  SimSpec spec;
  spec.m = 300;
  spec.seed = 10;
  spec.noise.snr = 4.0;
  SimResult sim = generate(spec);
  EXPECT_NEAR(sim.signal.array().square().mean() / sim.sigma2, 4.0, 1e-12);
  spec.noise.kind = NoiseKind::Ar1;
  sim = generate(spec);
  EXPECT_NEAR(sim.signal.array().square().mean() / (sim.sigma2 / (1 - 0.25)), 4.0, 1e-12);
}

TEST(Generate, ValidatesSpec) {
  SimSpec spec;
  spec.m = 2;
  spec.k = 3;
  EXPECT_THROW(generate(spec), InputError);
  spec.m = 10;
  spec.noise.kind = NoiseKind::Ar1;
  spec.noise.rho = 1.0;
  EXPECT_THROW(generate(spec), InputError);
  spec.noise.rho = 0.5;
  spec.noise.snr = -1.0;
  EXPECT_THROW(generate(spec), InputError);
  spec.noise.snr.reset();
  Rng rng(1);
  spec.beta = parametric_beta(2, 3, spec.grid, 24.0, rng);
  EXPECT_THROW(generate(spec), InputError);
}

TEST(Beta, ParametricOperatorsAreDistinctAndFinite) {
  Rng rng(11);
  const TimeGrid grid = TimeGrid::uniform(1.0, 24.0, 24);
  const BetaSpec b = parametric_beta(4, 3, grid, 24.0, rng);
  ASSERT_EQ(b.k(), 4u);
  for (const auto& op : b.clusters) {
    ASSERT_EQ(op.surfaces.size(), 3u);
    for (const auto& s : op.surfaces) EXPECT_TRUE(s.allFinite());
  }
  EXPECT_GT(b.separation(grid), 0.0);
  BetaSpec same;
  same.clusters = {b.clusters[0], b.clusters[0]};
  EXPECT_EQ(same.separation(grid), 0.0);
}

TEST(Beta, ParametricSurfaceFormula) {
  const TimeGrid grid = TimeGrid::uniform(1.0, 4.0, 4);
  const SurfaceParams sp{1.5, 2.0, 0.3, -0.7, 2.5};
  const Matrix s = parametric_surface(sp, grid, grid, 24.0);
  const double lag = 3.0 - 1.0;
  const double expect = (1.5 * std::cos(2 * std::numbers::pi * 2.0 * lag / 24.0 + 0.3) - 0.7 * std::exp(-lag * lag / (2 * 2.5 * 2.5))) / 24.0;
  EXPECT_NEAR(s(2, 0), expect, 1e-15);
}

TEST(Generate, TrueModelResidualsFarBelowWrongModels) {
  SimSpec spec;
  spec.m = 300;
  spec.seed = 12;
  spec.noise.sigma2 = 0.01;
  const SimResult sim = generate(spec);
  const FitConfig fit{1.0, 12, 4, PenaltyKind::SecondDifference};
  const FreclProblem problem(sim.data, fit);
  const ClusterModel models = problem.fit_models(sim.truth.canonical());
  const Matrix r = problem.residual_norms(models);
  const Partition canon = sim.truth.canonical();
  double own = 0.0, other = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    const int c = canon.label(static_cast<std::size_t>(i));
    own += r(i, c);
    double best_other = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < r.cols(); ++k)
      if (k != c) best_other = std::min(best_other, r(i, k));
    other += best_other;
  }
  EXPECT_LT(own, 0.25 * other);
}

TEST(Generate, SharedOperatorCarriesNoClusterSignal) {
  // every cluster uses the same operator, so the truth labels are unrelated to the data
  SimSpec spec;
  spec.m = 60;
  spec.noise.sigma2 = 0.1;
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    BetaSpec one = parametric_beta(1, 3, spec.grid, 24.0, rng);
    BetaSpec b;
    b.clusters = {one.clusters[0], one.clusters[0], one.clusters[0]};
    spec.beta = b;
    spec.seed = seed;
    const SimResult sim = generate(spec);
    RunConfig rc;
    rc.fit = FitConfig{100.0, 12, 4, PenaltyKind::SecondDifference};
    rc.seed = seed;
    const RunResult r = frecl_run(sim.data, rc);
    total += adjusted_rand_index(sim.truth, r.partition);
  }
  EXPECT_NEAR(total / 20.0, 0.0, 0.05);
}
