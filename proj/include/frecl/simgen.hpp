#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "frecl/fda_core.hpp"
#include "frecl/fofr.hpp"
#include "frecl/partition.hpp"

namespace frecl {

/// One cluster's operator evaluated on the grids: beta_0 on the response grid
/// and beta_j(t_r, s_q) as a T x T_j matrix per predictor.
struct ClusterOperator {
  Vector intercept;
  std::vector<Matrix> surfaces;
};

struct BetaSpec {
  std::vector<ClusterOperator> clusters;

  std::size_t k() const { return clusters.size(); }
  /// Smallest quadrature distance between two clusters' operators.
  double separation(const TimeGrid& grid) const;
};

/// Parameters of beta(t, s) = (a cos(2 pi f (t - s) / P + phi) + b exp(-(t - s)^2 / (2 tau^2))) / P.
struct SurfaceParams {
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase = 0.0;
  double bump = 0.0;
  double width = 2.0;
};

/// Evaluates the parametric surface on the (t, s) grid product.
Matrix parametric_surface(const SurfaceParams& sp, const TimeGrid& t_grid, const TimeGrid& s_grid, double period);

/// K random but well separated parametric operators. Cluster c has intercept
/// `intercept_amplitude * sin(2 pi (t / P + c / K))`; surface phases are
/// spread evenly over the clusters.
BetaSpec parametric_beta(int k, int p, const TimeGrid& grid, double period, Rng& rng,
                         double intercept_amplitude = 0.25);

/// Operators from coefficient bundles (exactly representable in the basis).
BetaSpec beta_from_coefficients(const std::vector<RegressionCoefficients>& bundles, const RegressionSpace& space,
                                const std::vector<TimeGrid>& predictor_grids);

enum class NoiseKind { Iid, Ar1 };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Iid;
  double sigma2 = 1.0;
  double rho = 0.5;
  /// When set, sigma2 (innovation variance for AR(1)) is chosen so that the
  /// mean per-curve signal power divided by the noise variance equals `snr`.
  std::optional<double> snr;
};

enum class PredictorSource { FourierRandom, ResamplePool };

struct SimSpec {
  std::size_t m = 300;
  int p = 3;
  int k = 3;
  TimeGrid grid = TimeGrid::uniform(1.0, 24.0, 24);
  double period = 24.0;
  /// Generated with `parametric_beta` from the seed when absent.
  std::optional<BetaSpec> beta;
  double intercept_amplitude = 0.25;
  NoiseSpec noise;
  PredictorSource source = PredictorSource::FourierRandom;
  int harmonics = 4;
  /// Variance multiplier on the Fourier coefficients (0 gives zero curves).
  double predictor_variance = 1.0;
  /// One curve set per predictor; rows are drawn jointly with replacement.
  std::vector<CurveSet> pool;
  std::uint64_t seed = 0;
};

Partition draw_true_partition(std::size_t m, int k, Rng& rng);

/// X(t) = sum_h u_h cos(2 pi h t / P) + v_h sin(2 pi h t / P), u_h, v_h ~ N(0, c / h^2).
Vector fourier_curve(const TimeGrid& grid, int harmonics, double period, double variance, Rng& rng);

std::vector<CurveSet> sample_predictors(const SimSpec& spec);

/// Stationary AR(1): e_1 ~ N(0, sigma2 / (1 - rho^2)), e_q = rho e_{q-1} + N(0, sigma2).
Vector ar1_noise(Eigen::Index t, double rho, double sigma2, Rng& rng);

/// Noise-free responses beta_0(t_r) + sum_j sum_s w_s beta_j(t_r, s) X_j(s).
Matrix apply_operators(const BetaSpec& beta, const Partition& truth, const std::vector<CurveSet>& predictors);

struct SimResult {
  FunctionalDataset data;
  Partition truth;
  BetaSpec beta;
  Matrix signal;
  double sigma2 = 0.0;
};

SimResult generate(const SimSpec& spec);

}  // namespace frecl
