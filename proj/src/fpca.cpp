#include "frecl/fpca.hpp"

#include <limits>
#include <string>

#include "frecl/metrics.hpp"

namespace frecl {

FpcaModel fpca(const CurveSet& cs, int n_components, int basis_count, int basis_order) {
  const Eigen::Index m = cs.rows();
  if (n_components < 1 || n_components > basis_count)
    throw InputError("fpca: requested " + std::to_string(n_components) + " components from a basis of " +
                     std::to_string(basis_count));
  if (m <= n_components) throw InputError("fpca: need more curves than components");

  const BSplineBasis basis(cs.grid(), basis_count, basis_order);
  const Matrix& b = basis.eval();
  const Vector& w = cs.grid().weights();
  const Matrix wb = w.asDiagonal() * b;
  const Matrix gram = b.transpose() * wb;

  Eigen::LDLT<Matrix> gram_solver(gram);
  const Matrix coeffs = gram_solver.solve(wb.transpose() * cs.values().transpose()).transpose();  // m x d
  const Eigen::RowVectorXd mean_c = coeffs.colwise().mean();
  const Matrix centered = coeffs.rowwise() - mean_c;
  const Matrix cov = centered.transpose() * centered / static_cast<double>(m - 1);

  Eigen::SelfAdjointEigenSolver<Matrix> gram_eig(gram);
  const Vector root = gram_eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix gram_half = gram_eig.eigenvectors() * root.asDiagonal() * gram_eig.eigenvectors().transpose();
  const Matrix gram_inv_half =
      gram_eig.eigenvectors() * root.cwiseInverse().asDiagonal() * gram_eig.eigenvectors().transpose();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_half * cov * gram_half);
  // ascending from Eigen; reverse to non-increasing
  Vector values = eig.eigenvalues().reverse();
  Matrix vectors = eig.eigenvectors().rowwise().reverse();

  FpcaModel model;
  model.grid = cs.grid();
  model.mean = b * mean_c.transpose();
  model.eigenvalues = values;
  model.eigenfunctions = b * gram_inv_half * vectors.leftCols(n_components);
  for (Eigen::Index a = 0; a < n_components; ++a) {
    Eigen::Index idx = 0;
    model.eigenfunctions.col(a).cwiseAbs().maxCoeff(&idx);
    if (model.eigenfunctions(idx, a) < 0.0) {
      model.eigenfunctions.col(a) *= -1.0;
      vectors.col(a) *= -1.0;
    }
  }
  model.scores = centered * gram_half * vectors.leftCols(n_components);
  model.smoothed = coeffs * b.transpose();
  return model;
}

Matrix reconstruct(const FpcaModel& model, Eigen::Index s) {
  if (s < 0 || s > model.components()) throw InputError("reconstruct: component count out of range");
  Matrix out = model.scores.leftCols(s) * model.eigenfunctions.leftCols(s).transpose();
  out.rowwise() += model.mean.transpose();
  return out;
}

Partition fpca_kmeans(const FpcaModel& model, int k, Eigen::Index s, Rng& rng, int restarts) {
  if (s < 1 || s > model.components()) throw InputError("fpca_kmeans: s exceeds the available components");
  return kmeans(model.scores.leftCols(s), KMeansConfig{k, restarts, 100}, rng).partition;
}

Partition fpca_kmeans(const CurveSet& cs, int k, Eigen::Index s, Rng& rng, int restarts) {
  return fpca_kmeans(fpca(cs, static_cast<int>(s)), k, s, rng, restarts);
}

OracleSweep oracle_sweep(const std::vector<CurveSet>& variables, int k, const Partition& truth, Rng& rng, int s_min,
                         int s_max, int restarts) {
  if (variables.empty()) throw InputError("oracle_sweep: no curve sets");
  if (s_min < 1 || s_max < s_min) throw InputError("oracle_sweep: invalid s range");
  if (truth.size() != static_cast<std::size_t>(variables.front().rows()))
    throw InputError("oracle_sweep: truth size does not match the data");
  std::vector<FpcaModel> models;
  models.reserve(variables.size());
  for (const auto& cs : variables) models.push_back(fpca(cs, s_max));

  OracleSweep out;
  out.ari = -std::numeric_limits<double>::infinity();
  const Eigen::Index m = variables.front().rows();
  for (int s = s_min; s <= s_max; ++s) {
    Matrix features(m, s * static_cast<Eigen::Index>(models.size()));
    for (std::size_t v = 0; v < models.size(); ++v)
      features.middleCols(static_cast<Eigen::Index>(v) * s, s) = models[v].scores.leftCols(s);
    Partition p = kmeans(features, KMeansConfig{k, restarts, 100}, rng).partition;
    const double ari = adjusted_rand_index(truth, p);
    out.rows.push_back(SweepRow{s, ari});
    if (ari > out.ari) {
      out.ari = ari;
      out.best_s = s;
      out.partition = std::move(p);
    }
  }
  return out;
}

}  // namespace frecl
