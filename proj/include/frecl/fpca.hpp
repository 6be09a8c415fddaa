#pragma once

#include <vector>

#include "frecl/bspline.hpp"
#include "frecl/fda_core.hpp"
#include "frecl/kmeans.hpp"
#include "frecl/partition.hpp"

namespace frecl {

/// Functional principal components of basis-smoothed curves.
struct FpcaModel {
  TimeGrid grid;
  Vector mean;             // mean of the smoothed curves, on the grid
  Matrix eigenfunctions;   // T x s, orthonormal under the quadrature weights
  Vector eigenvalues;      // all d of them, non-increasing
  Matrix scores;           // m x s
  Matrix smoothed;         // m x T basis projections of the input curves

  Eigen::Index components() const { return eigenfunctions.cols(); }
};

/// Projects each curve onto a `basis_count` B-spline basis of order
/// `basis_order` (weighted least squares) and diagonalizes the coefficient
/// covariance (divisor m - 1) in the quadrature inner product. Each
/// eigenfunction's largest-magnitude grid value is made positive.
FpcaModel fpca(const CurveSet& cs, int n_components, int basis_count = 12, int basis_order = 4);

/// Smoothed curves rebuilt from the mean and the first `s` components.
Matrix reconstruct(const FpcaModel& model, Eigen::Index s);

/// K-means on the first `s` score columns.
Partition fpca_kmeans(const FpcaModel& model, int k, Eigen::Index s, Rng& rng, int restarts = 10);
Partition fpca_kmeans(const CurveSet& cs, int k, Eigen::Index s, Rng& rng, int restarts = 10);

struct SweepRow {
  int s = 0;
  double ari = 0.0;
};

struct OracleSweep {
  int best_s = 0;
  Partition partition;
  double ari = 0.0;
  std::vector<SweepRow> rows;
};

/// For each s in [s_min, s_max], K-means on the first s scores of every
/// curve set (concatenated), keeping the s with the largest ARI against
/// `truth` (smallest s on ties).
OracleSweep oracle_sweep(const std::vector<CurveSet>& variables, int k, const Partition& truth, Rng& rng,
                         int s_min = 2, int s_max = 12, int restarts = 10);

inline OracleSweep oracle_sweep(const CurveSet& response, int k, const Partition& truth, Rng& rng, int s_min = 2,
                                int s_max = 12, int restarts = 10) {
  return oracle_sweep(std::vector<CurveSet>{response}, k, truth, rng, s_min, s_max, restarts);
}

}  // namespace frecl
