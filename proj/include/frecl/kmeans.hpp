#pragma once

#include <vector>

#include "frecl/fda_core.hpp"
#include "frecl/partition.hpp"

namespace frecl {

struct KMeansConfig {
  int k = 2;
  int restarts = 10;
  int max_iterations = 100;
};

struct KMeansResult {
  /// Canonical; K may be smaller than requested when rows coincide.
  Partition partition;
  Matrix centers;
  double inertia = 0.0;
  int iterations = 0;
  /// Within-cluster sum of squares after each assignment step of the winning restart.
  std::vector<double> objective_trace;
};

/// Lloyd's algorithm on the rows of `points` with k-means++ seeding; the
/// restart with the smallest within-cluster sum of squares wins (first on ties).
KMeansResult kmeans(const Matrix& points, const KMeansConfig& cfg, Rng& rng);

}  // namespace frecl
