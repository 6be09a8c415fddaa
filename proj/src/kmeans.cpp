#include "frecl/kmeans.hpp"

#include <limits>

namespace frecl {
namespace {

Matrix seed_plus_plus(const Matrix& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Matrix centers(k, x.cols());
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centers.row(0) = x.row(first(rng));
  Vector d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      const double target = u(rng);
      double acc = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc > target && d2(i) > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = first(rng);
    }
    centers.row(c) = x.row(chosen);
    d2 = d2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

struct Lloyd {
  std::vector<int> labels;
  Matrix centers;
  double inertia = 0.0;
  int iterations = 0;
  std::vector<double> trace;
};

double assign(const Matrix& x, const Matrix& centers, std::vector<int>& labels, Vector& dist) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
      const double d = (x.row(i) - centers.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    dist(i) = best_d;
    total += best_d;
  }
  return total;
}

void update_centers(const Matrix& x, std::vector<int>& labels, Matrix& centers) {
  const Eigen::Index k = centers.rows();
  auto recompute = [&]() {
    Matrix sums = Matrix::Zero(k, x.cols());
    Vector counts = Vector::Zero(k);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
      counts(labels[static_cast<std::size_t>(i)]) += 1.0;
    }
    for (Eigen::Index c = 0; c < k; ++c)
      if (counts(c) > 0.0) centers.row(c) = sums.row(c) / counts(c);
    return counts;
  };
  Vector counts = recompute();
  // empty clusters: move the point farthest from its centre into the empty cluster
  for (Eigen::Index c = 0; c < k; ++c) {
    if (counts(c) > 0.0) continue;
    Eigen::Index far = -1;
    double far_d = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const int own = labels[static_cast<std::size_t>(i)];
      if (counts(own) < 2.0) continue;
      const double d = (x.row(i) - centers.row(own)).squaredNorm();
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far < 0) continue;  // all rows coincide with their centres; leave the cluster empty
    labels[static_cast<std::size_t>(far)] = static_cast<int>(c);
    counts = recompute();
    centers.row(c) = x.row(far);
  }
}

Lloyd lloyd(const Matrix& x, Matrix centers, int max_iterations) {
  Lloyd out;
  out.labels.assign(static_cast<std::size_t>(x.rows()), -1);
  Vector dist(x.rows());
  std::vector<int> previous;
  for (int it = 1; it <= max_iterations; ++it) {
    out.inertia = assign(x, centers, out.labels, dist);
    out.trace.push_back(out.inertia);
    out.iterations = it;
    if (out.labels == previous) break;
    previous = out.labels;
    update_centers(x, out.labels, centers);
  }
  out.centers = std::move(centers);
  return out;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, const KMeansConfig& cfg, Rng& rng) {
  if (cfg.k < 1) throw InputError("kmeans: K must be at least 1");
  if (points.rows() < cfg.k) throw InputError("kmeans: K exceeds the number of rows");
  if (cfg.restarts < 1 || cfg.max_iterations < 1) throw InputError("kmeans: restarts and iterations must be positive");

  Lloyd best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.restarts; ++r) {
    Lloyd run = lloyd(points, seed_plus_plus(points, cfg.k, rng), cfg.max_iterations);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  KMeansResult out;
  out.partition = Partition(best.labels, cfg.k).canonical();
  out.centers.resize(out.partition.k(), points.cols());
  for (std::size_t i = 0; i < best.labels.size(); ++i)
    out.centers.row(out.partition.label(i)) = best.centers.row(best.labels[i]);
  out.inertia = best.inertia;
  out.iterations = best.iterations;
  out.objective_trace = std::move(best.trace);
  return out;
}

}  // namespace frecl
