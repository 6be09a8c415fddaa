#pragma once

#include <cstdint>
#include <optional>

#include "frecl/partition.hpp"

namespace frecl {

/// Pair counts over the m(m-1)/2 unordered pairs. "Positive" means the pair
/// shares a cluster in the reference (truth) partition.
struct PairCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fp + fn + tn; }
};

PairCounts pair_counts(const Partition& truth, const Partition& estimate);

double rand_index(const Partition& truth, const Partition& estimate);

/// Hubert-Arabie adjusted Rand index from the contingency table. When the
/// maximum and expected index coincide the value is 1 for identical
/// clusterings and 0 otherwise.
double adjusted_rand_index(const Partition& truth, const Partition& estimate);

/// tpr = tp / (tp + fn), tnr = tn / (tn + fp); a component is empty when its
/// denominator is zero.
struct ClusteringRates {
  std::optional<double> tpr;
  std::optional<double> tnr;
};

ClusteringRates tpr_tnr(const Partition& truth, const Partition& estimate);

}  // namespace frecl
