#include "frecl/partition.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "frecl/fda_core.hpp"

namespace frecl {

Partition::Partition(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
  if (k_ < 0) throw InputError("Partition: negative cluster count");
  for (int l : labels_) {
    if (l < 0 || l >= k_) throw InputError("Partition: label " + std::to_string(l) + " outside [0, K)");
  }
}

Partition::Partition(std::vector<int> labels)
    : Partition(labels, labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1) {}

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k_), 0);
  for (int l : labels_) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

int Partition::nonempty_count() const {
  const auto sizes = cluster_sizes();
  return static_cast<int>(std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));
}

std::vector<std::size_t> Partition::members(int cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == cluster) out.push_back(i);
  return out;
}

Partition Partition::canonical() const {
  std::vector<int> remap(static_cast<std::size_t>(k_), -1);
  std::vector<int> out(labels_.size());
  int next = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    int& r = remap[static_cast<std::size_t>(labels_[i])];
    if (r < 0) r = next++;
    out[i] = r;
  }
  return Partition(std::move(out), next);
}

bool Partition::same_clustering(const Partition& other) const {
  return size() == other.size() && canonical() == other.canonical();
}

Partition random_initial_partition(std::size_t m, int k, Rng& rng) {
  if (k < 1) throw InputError("random_initial_partition: K must be at least 1");
  if (static_cast<std::size_t>(k) > m) throw InputError("random_initial_partition: K exceeds the number of observations");
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> labels(m, 0);
  std::uniform_int_distribution<int> pick(0, k - 1);
  for (std::size_t r = 0; r < m; ++r) labels[order[r]] = r < static_cast<std::size_t>(k) ? static_cast<int>(r) : pick(rng);
  return Partition(std::move(labels), k);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace frecl
