#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace frecl {

using Rng = std::mt19937_64;

/// Assignment of m observations to K clusters. Labels are 0-based in memory
/// (files use 1-based labels); clusters may be empty.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<int> labels, int k);
  /// K taken as max label + 1.
  explicit Partition(std::vector<int> labels);

  const std::vector<int>& labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }
  std::size_t size() const { return labels_.size(); }
  int k() const { return k_; }

  std::vector<std::size_t> cluster_sizes() const;
  int nonempty_count() const;
  std::vector<std::size_t> members(int cluster) const;

  /// Labels renumbered by first appearance; K becomes the number of non-empty clusters.
  Partition canonical() const;

  /// Equal up to a relabeling of clusters.
  bool same_clustering(const Partition& other) const;

  bool operator==(const Partition& other) const { return k_ == other.k_ && labels_ == other.labels_; }

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

/// Uniform random partition with every cluster non-empty: K distinct
/// observations seed the K clusters, the rest are labeled uniformly.
Partition random_initial_partition(std::size_t m, int k, Rng& rng);

/// Deterministic 64-bit mixing of a seed with a stream index (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace frecl
