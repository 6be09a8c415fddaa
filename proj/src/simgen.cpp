#include "frecl/simgen.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace frecl {
namespace {

// RNG substreams of one simulation seed
enum Stream : std::uint64_t { kPartition = 0, kBeta = 1, kPredictors = 2, kNoise = 3 };

Rng substream(std::uint64_t seed, Stream s, std::uint64_t index = 0) {
  return Rng(derive_seed(derive_seed(seed, s), index));
}

}  // namespace

double BetaSpec::separation(const TimeGrid& grid) const {
  const Vector& w = grid.weights();
  const Matrix ww = w * w.transpose();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < clusters.size(); ++b) {
      double d2 = (w.array() * (clusters[a].intercept - clusters[b].intercept).array().square()).sum();
      for (std::size_t j = 0; j < clusters[a].surfaces.size(); ++j)
        d2 += (ww.array() * (clusters[a].surfaces[j] - clusters[b].surfaces[j]).array().square()).sum();
      best = std::min(best, std::sqrt(d2));
    }
  }
  return best;
}

Matrix parametric_surface(const SurfaceParams& sp, const TimeGrid& t_grid, const TimeGrid& s_grid, double period) {
  const double two_pi = 2.0 * std::numbers::pi;
  Matrix out(t_grid.size(), s_grid.size());
  for (Eigen::Index r = 0; r < t_grid.size(); ++r) {
    for (Eigen::Index q = 0; q < s_grid.size(); ++q) {
      const double lag = t_grid.points()(r) - s_grid.points()(q);
      out(r, q) = (sp.amplitude * std::cos(two_pi * sp.frequency * lag / period + sp.phase) +
                   sp.bump * std::exp(-lag * lag / (2.0 * sp.width * sp.width))) /
                  period;
    }
  }
  return out;
}

BetaSpec parametric_beta(int k, int p, const TimeGrid& grid, double period, Rng& rng, double intercept_amplitude) {
  if (k < 1 || p < 0) throw InputError("parametric_beta: need K >= 1 and p >= 0");
  const double two_pi = 2.0 * std::numbers::pi;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  BetaSpec beta;
  beta.clusters.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    Vector& intercept = beta.clusters[static_cast<std::size_t>(c)].intercept;
    intercept.resize(grid.size());
    for (Eigen::Index r = 0; r < grid.size(); ++r)
      intercept(r) = intercept_amplitude * std::sin(two_pi * (grid.points()(r) / period + static_cast<double>(c) / k));
  }
  for (int j = 0; j < p; ++j) {
    // phases spread evenly over the clusters, rotated per predictor
    const double rotation = j == 0 ? 0.0 : two_pi * unit(rng);
    for (int c = 0; c < k; ++c) {
      SurfaceParams sp;
      sp.amplitude = (0.6 + 0.8 * unit(rng)) * (coin(rng) ? 1.0 : -1.0);
      sp.frequency = 1.0;
      sp.phase = two_pi * (static_cast<double>(c) + 0.3 * (unit(rng) - 0.5)) / k + rotation;
      sp.bump = 2.0 * unit(rng) - 1.0;
      sp.width = 1.5 + 2.5 * unit(rng);
      beta.clusters[static_cast<std::size_t>(c)].surfaces.push_back(parametric_surface(sp, grid, grid, period));
    }
  }
  return beta;
}

BetaSpec beta_from_coefficients(const std::vector<RegressionCoefficients>& bundles, const RegressionSpace& space,
                                const std::vector<TimeGrid>& predictor_grids) {
  if (predictor_grids.size() != space.predictor_count())
    throw InputError("beta_from_coefficients: predictor grid count does not match the regression space");
  BetaSpec beta;
  const Matrix& bt = space.response_basis().eval();
  for (const auto& c : bundles) {
    if (c.theta.rows() != space.basis_count() || c.theta.cols() != space.feature_count())
      throw InputError("beta_from_coefficients: bundle does not match the regression space");
    ClusterOperator op;
    op.intercept = bt * c.intercept();
    for (std::size_t j = 0; j < space.predictor_count(); ++j)
      op.surfaces.push_back(bt * c.surface(j) * space.predictor_basis(j).eval().transpose());
    beta.clusters.push_back(std::move(op));
  }
  return beta;
}

Partition draw_true_partition(std::size_t m, int k, Rng& rng) { return random_initial_partition(m, k, rng); }

Vector fourier_curve(const TimeGrid& grid, int harmonics, double period, double variance, Rng& rng) {
  const double two_pi = 2.0 * std::numbers::pi;
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector x = Vector::Zero(grid.size());
  for (int h = 1; h <= harmonics; ++h) {
    const double sd = std::sqrt(variance) / h;
    const double u = sd * gauss(rng);
    const double v = sd * gauss(rng);
    for (Eigen::Index q = 0; q < grid.size(); ++q) {
      const double arg = two_pi * h * grid.points()(q) / period;
      x(q) += u * std::cos(arg) + v * std::sin(arg);
    }
  }
  return x;
}

std::vector<CurveSet> sample_predictors(const SimSpec& spec) {
  const auto m = static_cast<Eigen::Index>(spec.m);
  const auto p = static_cast<std::size_t>(spec.p);
  std::vector<Matrix> values;
  std::vector<TimeGrid> grids;

  if (spec.source == PredictorSource::ResamplePool) {
    if (spec.pool.size() != p) throw InputError("sample_predictors: pool must hold one curve set per predictor");
    const Eigen::Index pool_rows = p == 0 ? 0 : spec.pool.front().rows();
    for (const auto& cs : spec.pool)
      if (cs.rows() != pool_rows) throw InputError("sample_predictors: pool curve sets differ in row count");
    if (p > 0 && pool_rows == 0) throw InputError("sample_predictors: empty pool");
    for (const auto& cs : spec.pool) {
      values.emplace_back(m, cs.points());
      grids.push_back(cs.grid());
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      Rng rng = substream(spec.seed, kPredictors, static_cast<std::uint64_t>(i));
      std::uniform_int_distribution<Eigen::Index> pick(0, pool_rows - 1);
      const Eigen::Index row = p == 0 ? 0 : pick(rng);
      for (std::size_t j = 0; j < p; ++j) values[j].row(i) = spec.pool[j].row(row);
    }
  } else {
    for (std::size_t j = 0; j < p; ++j) {
      values.emplace_back(m, spec.grid.size());
      grids.push_back(spec.grid);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      Rng rng = substream(spec.seed, kPredictors, static_cast<std::uint64_t>(i));
      for (std::size_t j = 0; j < p; ++j)
        values[j].row(i) = fourier_curve(spec.grid, spec.harmonics, spec.period, spec.predictor_variance, rng).transpose();
    }
  }
  std::vector<CurveSet> out;
  for (std::size_t j = 0; j < p; ++j) out.emplace_back(grids[j], std::move(values[j]));
  return out;
}

Vector ar1_noise(Eigen::Index t, double rho, double sigma2, Rng& rng) {
  if (!(std::abs(rho) < 1.0)) throw InputError("ar1_noise: |rho| must be below 1");
  if (!(sigma2 >= 0.0)) throw InputError("ar1_noise: sigma2 must be non-negative");
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sd = std::sqrt(sigma2);
  Vector e(t);
  if (t == 0) return e;
  e(0) = sd / std::sqrt(1.0 - rho * rho) * gauss(rng);
  for (Eigen::Index q = 1; q < t; ++q) e(q) = rho * e(q - 1) + sd * gauss(rng);
  return e;
}

Matrix apply_operators(const BetaSpec& beta, const Partition& truth, const std::vector<CurveSet>& predictors) {
  if (beta.k() < static_cast<std::size_t>(truth.k()))
    throw InputError("apply_operators: fewer operators than clusters");
  const auto m = static_cast<Eigen::Index>(truth.size());
  const Eigen::Index t = beta.clusters.front().intercept.size();
  Matrix y(m, t);
  for (Eigen::Index i = 0; i < m; ++i) {
    const ClusterOperator& op = beta.clusters[static_cast<std::size_t>(truth.label(static_cast<std::size_t>(i)))];
    if (op.surfaces.size() != predictors.size()) throw InputError("apply_operators: predictor count mismatch");
    Vector yi = op.intercept;
    for (std::size_t j = 0; j < predictors.size(); ++j) {
      const CurveSet& x = predictors[j];
      yi += op.surfaces[j] * (x.grid().weights().array() * x.row(i).transpose().array()).matrix();
    }
    y.row(i) = yi.transpose();
  }
  return y;
}

SimResult generate(const SimSpec& spec) {
  if (spec.k < 1) throw InputError("generate: K must be at least 1");
  if (spec.m < static_cast<std::size_t>(spec.k)) throw InputError("generate: K exceeds the number of observations");
  if (spec.p < 0) throw InputError("generate: p must be non-negative");
  if (spec.noise.kind == NoiseKind::Ar1 && !(std::abs(spec.noise.rho) < 1.0))
    throw InputError("generate: AR(1) requires |rho| < 1");

  SimResult out;
  Rng part_rng = substream(spec.seed, kPartition);
  out.truth = draw_true_partition(spec.m, spec.k, part_rng);

  if (spec.beta) {
    out.beta = *spec.beta;
    if (out.beta.k() != static_cast<std::size_t>(spec.k))
      throw InputError("generate: BetaSpec has " + std::to_string(out.beta.k()) + " clusters, expected " +
                       std::to_string(spec.k));
  } else {
    Rng beta_rng = substream(spec.seed, kBeta);
    out.beta = parametric_beta(spec.k, spec.p, spec.grid, spec.period, beta_rng, spec.intercept_amplitude);
  }

  std::vector<CurveSet> predictors = sample_predictors(spec);
  out.signal = apply_operators(out.beta, out.truth, predictors);

  double sigma2 = spec.noise.sigma2;
  if (spec.noise.snr) {
    if (!(*spec.noise.snr > 0.0)) throw InputError("generate: snr must be positive");
    const double power = out.signal.array().square().mean();
    const double marginal = power / *spec.noise.snr;
    sigma2 = spec.noise.kind == NoiseKind::Ar1 ? marginal * (1.0 - spec.noise.rho * spec.noise.rho) : marginal;
  }
  if (!(sigma2 >= 0.0)) throw InputError("generate: sigma2 must be non-negative");
  out.sigma2 = sigma2;

  Matrix y = out.signal;
  if (sigma2 > 0.0) {
    const Eigen::Index t = y.cols();
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      Rng rng = substream(spec.seed, kNoise, static_cast<std::uint64_t>(i));
      if (spec.noise.kind == NoiseKind::Ar1) {
        y.row(i) += ar1_noise(t, spec.noise.rho, sigma2, rng).transpose();
      } else {
        std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2));
        for (Eigen::Index q = 0; q < t; ++q) y(i, q) += gauss(rng);
      }
    }
  }
  if (y.cols() != spec.grid.size()) throw InputError("generate: operators do not match the response grid");
  out.data = FunctionalDataset(CurveSet(spec.grid, std::move(y)), std::move(predictors));
  return out;
}

}  // namespace frecl
