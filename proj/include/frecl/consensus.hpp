#pragma once

#include <cstdint>
#include <vector>

#include "frecl/frecl.hpp"
#include "frecl/kmeans.hpp"

namespace frecl {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Binary m x m matrix: entry (i, j) is 1 when i and j share a cluster.
CountMatrix comembership(const Partition& p);

/// Co-clustering counts summed over the convergent runs.
struct ConsensusMatrix {
  CountMatrix counts;
  int runs_used = 0;

  void add(const Partition& p);
};

ConsensusMatrix accumulate(const std::vector<CountMatrix>& memberships);

/// K-means on the (unnormalized) rows of the consensus matrix.
KMeansResult kmeans_rows(const ConsensusMatrix& b, int k, int restarts, Rng& rng);

struct ConsensusConfig {
  RunConfig run;
  int runs = 100;
  int kmeans_restarts = 10;
  int threads = 1;
  std::uint64_t master_seed = 0;
};

struct ConsensusResult {
  Partition partition;
  ConsensusMatrix matrix;
  std::vector<std::uint64_t> run_seeds;
  std::vector<RunResult> runs;
  int convergent_runs = 0;
  /// ARI of each convergent run against the final partition; NaN for discarded runs.
  std::vector<double> ari_to_final;
};

/// Seed of run l; independent of the number of runs and of scheduling.
inline std::uint64_t run_seed(std::uint64_t master, std::size_t run) { return derive_seed(master, run); }

/// L independent FRECL runs; non-convergent runs are discarded, the
/// co-memberships of the rest are summed and their rows clustered by K-means.
/// Throws NumericalError when no run converges.
ConsensusResult frecl_consensus(const FreclProblem& problem, const ConsensusConfig& cfg);

struct ElbowRow {
  int k_requested = 0;
  int k_final = 0;
  double mse = 0.0;
};

/// One consensus pipeline per requested K (duplicates kept) and the MSE of its final partition.
std::vector<ElbowRow> elbow_table(const FreclProblem& problem, const std::vector<int>& k_values,
                                  const ConsensusConfig& cfg);

}  // namespace frecl
