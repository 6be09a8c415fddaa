#pragma once

#include <cstdint>
#include <vector>

#include "frecl/fda_core.hpp"
#include "frecl/fofr.hpp"
#include "frecl/partition.hpp"

namespace frecl {

struct RunConfig {
  int k = 3;
  int max_iterations = 300;
  NormKind norm = NormKind::L2;
  FitConfig fit;
  std::uint64_t seed = 0;
  /// Stop (not converged) when P_{j+1} equals P_{j-1}.
  bool detect_cycles = true;
  /// Keep every intermediate partition in `RunResult::history`.
  bool record_history = false;
};

struct RunResult {
  Partition initial;
  Partition partition;
  int iterations = 0;
  bool converged = false;
  bool cycled = false;
  /// Per iteration: mean squared residual norm after reassignment.
  std::vector<double> mse_trace;
  /// Per iteration: non-empty clusters after reassignment.
  std::vector<int> k_trace;
  /// Per iteration: summed squared residual norms at the freshly fitted
  /// models, under the old and the new assignment.
  std::vector<double> sse_before;
  std::vector<double> sse_after;
  /// Canonical partitions P_1 .. P_J when `record_history` is set.
  std::vector<Partition> history;
};

/// One fitted model per non-empty cluster; `labels[k]` is the cluster that produced `models[k]`.
struct ClusterModel {
  std::vector<RegressionCoefficients> models;
  std::vector<int> labels;
};

/// A dataset prepared for repeated fitting: bases, feature rows and responses
/// are computed once and shared (read-only) by every run.
class FreclProblem {
 public:
  FreclProblem(const FunctionalDataset& data, const FitConfig& fit, NormKind norm = NormKind::L2);

  std::size_t size() const { return static_cast<std::size_t>(responses_.rows()); }
  const RegressionSpace& space() const { return space_; }
  const Matrix& features() const { return features_; }
  const Matrix& responses() const { return responses_; }
  const FitConfig& fit_config() const { return fit_; }
  NormKind norm() const { return norm_; }

  RegressionCoefficients fit_cluster(const std::vector<std::size_t>& members) const;
  ClusterModel fit_models(const Partition& p) const;
  /// m x (number of models) residual norms.
  Matrix residual_norms(const ClusterModel& models) const;

 private:
  RegressionSpace space_;
  Matrix features_;
  Matrix responses_;
  FitConfig fit_;
  NormKind norm_;
};

/// Each observation goes to the model with the smallest residual norm; ties
/// go to the lowest model index. The result is not canonicalized.
Partition reassign(const FreclProblem& problem, const ClusterModel& models);
Partition reassign(const FunctionalDataset& data, const ClusterModel& models, const FitConfig& fit,
                   NormKind norm);

/// One FRECL run: alternate per-cluster fits and reassignment from a random
/// initial partition until two consecutive canonical partitions agree.
RunResult frecl_run(const FreclProblem& problem, const RunConfig& cfg, Rng& rng);
RunResult frecl_run(const FreclProblem& problem, const RunConfig& cfg, const Partition& initial);
RunResult frecl_run(const FunctionalDataset& data, const RunConfig& cfg);

/// Mean over observations of the squared residual norm under the model refit on its own cluster.
double mse_of_partition(const FreclProblem& problem, const Partition& p);
double mse_of_partition(const FunctionalDataset& data, const Partition& p, const FitConfig& fit,
                        NormKind norm = NormKind::L2);

}  // namespace frecl
