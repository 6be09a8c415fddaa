#include "frecl/metrics.hpp"

#include <vector>

#include "frecl/fda_core.hpp"

namespace frecl {
namespace {

std::int64_t choose2(std::int64_t n) { return n * (n - 1) / 2; }

struct Contingency {
  std::int64_t together_both = 0;   // sum_ij C(n_ij, 2)
  std::int64_t together_truth = 0;  // sum_i C(a_i, 2)
  std::int64_t together_est = 0;    // sum_j C(b_j, 2)
  std::int64_t pairs = 0;
};

Contingency contingency(const Partition& truth, const Partition& estimate) {
  if (truth.size() != estimate.size()) throw InputError("metrics: partitions differ in size");
  const auto rows = static_cast<std::size_t>(truth.k());
  const auto cols = static_cast<std::size_t>(estimate.k());
  std::vector<std::int64_t> table(rows * cols, 0);
  std::vector<std::int64_t> a(rows, 0);
  std::vector<std::int64_t> b(cols, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto r = static_cast<std::size_t>(truth.label(i));
    const auto c = static_cast<std::size_t>(estimate.label(i));
    ++table[r * cols + c];
    ++a[r];
    ++b[c];
  }
  Contingency out;
  for (auto n : table) out.together_both += choose2(n);
  for (auto n : a) out.together_truth += choose2(n);
  for (auto n : b) out.together_est += choose2(n);
  out.pairs = choose2(static_cast<std::int64_t>(truth.size()));
  return out;
}

}  // namespace

PairCounts pair_counts(const Partition& truth, const Partition& estimate) {
  const Contingency c = contingency(truth, estimate);
  PairCounts p;
  p.tp = c.together_both;
  p.fn = c.together_truth - c.together_both;
  p.fp = c.together_est - c.together_both;
  p.tn = c.pairs - p.tp - p.fn - p.fp;
  return p;
}

double rand_index(const Partition& truth, const Partition& estimate) {
  if (truth.size() < 2) throw InputError("rand_index: need at least 2 observations");
  const PairCounts p = pair_counts(truth, estimate);
  return static_cast<double>(p.tp + p.tn) / static_cast<double>(p.total());
}

double adjusted_rand_index(const Partition& truth, const Partition& estimate) {
  if (truth.size() < 2) throw InputError("adjusted_rand_index: need at least 2 observations");
  const Contingency c = contingency(truth, estimate);
  const double index = static_cast<double>(c.together_both);
  const double expected =
      static_cast<double>(c.together_truth) * static_cast<double>(c.together_est) / static_cast<double>(c.pairs);
  const double max_index = 0.5 * static_cast<double>(c.together_truth + c.together_est);
  if (max_index == expected) return truth.same_clustering(estimate) ? 1.0 : 0.0;
  return (index - expected) / (max_index - expected);
}

ClusteringRates tpr_tnr(const Partition& truth, const Partition& estimate) {
  const PairCounts p = pair_counts(truth, estimate);
  ClusteringRates r;
  if (p.tp + p.fn > 0) r.tpr = static_cast<double>(p.tp) / static_cast<double>(p.tp + p.fn);
  if (p.tn + p.fp > 0) r.tnr = static_cast<double>(p.tn) / static_cast<double>(p.tn + p.fp);
  return r;
}

}  // namespace frecl
