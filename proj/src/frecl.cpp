#include "frecl/frecl.hpp"

#include <limits>

namespace frecl {

FreclProblem::FreclProblem(const FunctionalDataset& data, const FitConfig& fit, NormKind norm)
    : space_(RegressionSpace::for_dataset(data, fit)),
      features_(space_.features(data)),
      responses_(data.response().values()),
      fit_(fit),
      norm_(norm) {
  if (data.size() < 1) throw InputError("FreclProblem: empty dataset");
}

RegressionCoefficients FreclProblem::fit_cluster(const std::vector<std::size_t>& members) const {
  const auto n = static_cast<Eigen::Index>(members.size());
  Matrix u(n, features_.cols());
  Matrix y(n, responses_.cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto i = static_cast<Eigen::Index>(members[static_cast<std::size_t>(r)]);
    u.row(r) = features_.row(i);
    y.row(r) = responses_.row(i);
  }
  return fit(space_, u, y, fit_);
}

ClusterModel FreclProblem::fit_models(const Partition& p) const {
  if (p.size() != size()) throw InputError("fit_models: partition size does not match the dataset");
  ClusterModel out;
  for (int k = 0; k < p.k(); ++k) {
    const auto members = p.members(k);
    if (members.empty()) continue;
    out.models.push_back(fit_cluster(members));
    out.labels.push_back(k);
  }
  return out;
}

Matrix FreclProblem::residual_norms(const ClusterModel& models) const {
  const auto m = static_cast<Eigen::Index>(size());
  Matrix r(m, static_cast<Eigen::Index>(models.models.size()));
  const Vector& w = space_.response_grid().weights();
  for (std::size_t k = 0; k < models.models.size(); ++k) {
    const Matrix resid = responses_ - predict_all(space_, models.models[k], features_);
    const auto col = static_cast<Eigen::Index>(k);
    if (norm_ == NormKind::L1)
      r.col(col) = resid.cwiseAbs() * w;
    else
      r.col(col) = (resid.array().square().matrix() * w).cwiseSqrt();
  }
  return r;
}

Partition reassign(const FreclProblem& problem, const ClusterModel& models) {
  if (models.models.empty()) throw InputError("reassign: no models");
  const Matrix r = problem.residual_norms(models);
  std::vector<int> labels(problem.size());
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < r.cols(); ++k)
      if (r(i, k) < r(i, best)) best = k;
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return Partition(std::move(labels), static_cast<int>(models.models.size()));
}

Partition reassign(const FunctionalDataset& data, const ClusterModel& models, const FitConfig& fit, NormKind norm) {
  return reassign(FreclProblem(data, fit, norm), models);
}

RunResult frecl_run(const FreclProblem& problem, const RunConfig& cfg, const Partition& initial) {
  if (cfg.max_iterations < 1) throw InputError("frecl_run: max_iterations must be at least 1");
  if (initial.size() != problem.size()) throw InputError("frecl_run: initial partition size mismatch");

  RunResult res;
  res.initial = initial;
  Partition current = initial.canonical();
  Partition previous;
  bool have_previous = false;
  const double m = static_cast<double>(problem.size());

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const ClusterModel models = problem.fit_models(current);
    const Matrix r = problem.residual_norms(models);

    // current is canonical and dense, so label k is model k
    double before = 0.0;
    double after = 0.0;
    std::vector<int> labels(problem.size());
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      Eigen::Index best = 0;
      for (Eigen::Index k = 1; k < r.cols(); ++k)
        if (r(i, k) < r(i, best)) best = k;
      labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
      const double own = r(i, current.label(static_cast<std::size_t>(i)));
      before += own * own;
      after += r(i, best) * r(i, best);
    }
    const Partition next = Partition(std::move(labels), static_cast<int>(r.cols())).canonical();

    res.iterations = it;
    res.sse_before.push_back(before);
    res.sse_after.push_back(after);
    res.mse_trace.push_back(after / m);
    res.k_trace.push_back(next.k());
    if (cfg.record_history) res.history.push_back(next);

    if (next == current) {
      res.converged = true;
      current = next;
      break;
    }
    if (cfg.detect_cycles && have_previous && next == previous) {
      res.cycled = true;
      current = next;
      break;
    }
    previous = std::move(current);
    have_previous = true;
    current = next;
  }
  res.partition = std::move(current);
  return res;
}

RunResult frecl_run(const FreclProblem& problem, const RunConfig& cfg, Rng& rng) {
  if (cfg.k < 1) throw InputError("frecl_run: K must be at least 1");
  if (static_cast<std::size_t>(cfg.k) > problem.size()) throw InputError("frecl_run: K exceeds the number of observations");
  return frecl_run(problem, cfg, random_initial_partition(problem.size(), cfg.k, rng));
}

RunResult frecl_run(const FunctionalDataset& data, const RunConfig& cfg) {
  const FreclProblem problem(data, cfg.fit, cfg.norm);
  Rng rng(cfg.seed);
  return frecl_run(problem, cfg, rng);
}

double mse_of_partition(const FreclProblem& problem, const Partition& p) {
  const ClusterModel models = problem.fit_models(p);
  const Matrix r = problem.residual_norms(models);
  double total = 0.0;
  for (std::size_t k = 0; k < models.labels.size(); ++k) {
    for (std::size_t i : p.members(models.labels[k])) {
      const double v = r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      total += v * v;
    }
  }
  return total / static_cast<double>(problem.size());
}

double mse_of_partition(const FunctionalDataset& data, const Partition& p, const FitConfig& fit, NormKind norm) {
  return mse_of_partition(FreclProblem(data, fit, norm), p);
}

}  // namespace frecl
