#include "frecl/consensus.hpp"

#include <limits>
#include <string>

#include "frecl/metrics.hpp"
#include "frecl/parallel.hpp"

namespace frecl {

CountMatrix comembership(const Partition& p) {
  const auto m = static_cast<Eigen::Index>(p.size());
  CountMatrix a(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      a(i, j) = p.label(static_cast<std::size_t>(i)) == p.label(static_cast<std::size_t>(j)) ? 1 : 0;
  return a;
}

void ConsensusMatrix::add(const Partition& p) {
  const auto m = static_cast<Eigen::Index>(p.size());
  if (runs_used == 0 && counts.size() == 0) counts = CountMatrix::Zero(m, m);
  if (counts.rows() != m) throw InputError("ConsensusMatrix: partition size mismatch");
  for (Eigen::Index i = 0; i < m; ++i) {
    const int li = p.label(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < m; ++j)
      if (li == p.label(static_cast<std::size_t>(j))) ++counts(i, j);
  }
  ++runs_used;
}

ConsensusMatrix accumulate(const std::vector<CountMatrix>& memberships) {
  ConsensusMatrix b;
  for (const auto& a : memberships) {
    if (b.runs_used == 0) {
      b.counts = a;
    } else {
      if (a.rows() != b.counts.rows() || a.cols() != b.counts.cols())
        throw InputError("accumulate: co-membership dimensions differ");
      b.counts += a;
    }
    ++b.runs_used;
  }
  return b;
}

KMeansResult kmeans_rows(const ConsensusMatrix& b, int k, int restarts, Rng& rng) {
  return kmeans(b.counts.cast<double>(), KMeansConfig{k, restarts, 100}, rng);
}

ConsensusResult frecl_consensus(const FreclProblem& problem, const ConsensusConfig& cfg) {
  if (cfg.runs < 1) throw InputError("frecl_consensus: need at least one run");
  ConsensusResult res;
  const auto runs = static_cast<std::size_t>(cfg.runs);
  res.run_seeds.resize(runs);
  res.runs.resize(runs);
  for (std::size_t l = 0; l < runs; ++l) res.run_seeds[l] = run_seed(cfg.master_seed, l);

  parallel_for(runs, cfg.threads, [&](std::size_t l) {
    Rng rng(res.run_seeds[l]);
    res.runs[l] = frecl_run(problem, cfg.run, rng);
  });

  // summed in run order; integer sums make this independent of scheduling anyway
  for (const auto& r : res.runs) {
    if (!r.converged) continue;
    res.matrix.add(r.partition);
    ++res.convergent_runs;
  }
  if (res.convergent_runs == 0)
    throw NumericalError("frecl_consensus: none of the " + std::to_string(cfg.runs) + " runs converged");

  Rng km_rng(derive_seed(cfg.master_seed, std::numeric_limits<std::uint64_t>::max() - 1));
  res.partition = kmeans_rows(res.matrix, cfg.run.k, cfg.kmeans_restarts, km_rng).partition;

  res.ari_to_final.reserve(runs);
  for (const auto& r : res.runs)
    res.ari_to_final.push_back(r.converged ? adjusted_rand_index(res.partition, r.partition)
                                           : std::numeric_limits<double>::quiet_NaN());
  return res;
}

std::vector<ElbowRow> elbow_table(const FreclProblem& problem, const std::vector<int>& k_values,
                                  const ConsensusConfig& cfg) {
  if (k_values.empty()) throw InputError("elbow_table: no K values given");
  std::vector<ElbowRow> rows;
  rows.reserve(k_values.size());
  for (int k : k_values) {
    if (k < 1 || static_cast<std::size_t>(k) > problem.size())
      throw InputError("elbow_table: K = " + std::to_string(k) + " outside [1, m]");
    ConsensusConfig c = cfg;
    c.run.k = k;
    const ConsensusResult res = frecl_consensus(problem, c);
    rows.push_back(ElbowRow{k, res.partition.k(), mse_of_partition(problem, res.partition)});
  }
  return rows;
}

}  // namespace frecl
