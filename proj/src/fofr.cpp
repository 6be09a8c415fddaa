#include "frecl/fofr.hpp"

#include <cmath>
#include <limits>

namespace frecl {

RegressionSpace::RegressionSpace(const TimeGrid& response_grid, const std::vector<TimeGrid>& predictor_grids,
                                 int basis_count, int basis_order)
    : response_grid_(response_grid),
      basis_count_(basis_count),
      response_basis_(response_grid, basis_count, basis_order),
      predictor_grids_(predictor_grids) {
  predictor_bases_.reserve(predictor_grids.size());
  projections_.reserve(predictor_grids.size());
  for (const auto& g : predictor_grids) {
    predictor_bases_.emplace_back(g, basis_count, basis_order);
    projections_.push_back((predictor_bases_.back().eval().array().colwise() * g.weights().array())
                               .matrix()
                               .transpose());
  }
  const Matrix& b = response_basis_.eval();
  gram_ = b.transpose() * response_grid_.weights().asDiagonal() * b;
}

RegressionSpace RegressionSpace::for_dataset(const FunctionalDataset& data, const FitConfig& cfg) {
  std::vector<TimeGrid> grids;
  grids.reserve(data.predictor_count());
  for (const auto& x : data.predictors()) grids.push_back(x.grid());
  return RegressionSpace(data.response().grid(), grids, cfg.basis_count, cfg.basis_order);
}

Vector RegressionSpace::features(const std::vector<Vector>& predictor_curves) const {
  if (predictor_curves.size() != predictor_count())
    throw InputError("features: expected " + std::to_string(predictor_count()) + " predictor curves");
  Vector u(feature_count());
  u(0) = 1.0;
  for (std::size_t j = 0; j < predictor_count(); ++j) {
    if (predictor_curves[j].size() != predictor_grids_[j].size())
      throw InputError("features: predictor curve length does not match its grid");
    u.segment(1 + static_cast<Eigen::Index>(j) * basis_count_, basis_count_) = projections_[j] * predictor_curves[j];
  }
  return u;
}

Matrix RegressionSpace::features(const FunctionalDataset& data) const {
  if (data.predictor_count() != predictor_count())
    throw InputError("features: dataset predictor count does not match the regression space");
  Matrix u(data.size(), feature_count());
  u.col(0).setOnes();
  for (std::size_t j = 0; j < predictor_count(); ++j) {
    const CurveSet& x = data.predictor(j);
    if (x.points() != predictor_grids_[j].size())
      throw InputError("features: predictor grid does not match the regression space");
    u.middleCols(1 + static_cast<Eigen::Index>(j) * basis_count_, basis_count_) =
        x.values() * projections_[j].transpose();
  }
  return u;
}

Matrix RegressionSpace::design_rows(const Eigen::Ref<const Vector>& u) const {
  if (u.size() != feature_count()) throw InputError("design_rows: feature vector has the wrong length");
  const Matrix& b = response_basis_.eval();
  const Eigen::Index d = basis_count_;
  Matrix rows(b.rows(), d * feature_count());
  for (Eigen::Index c = 0; c < feature_count(); ++c) rows.middleCols(c * d, d) = b * u(c);
  return rows;
}

namespace {

Matrix kronecker(const Matrix& outer, const Matrix& inner) {
  Matrix out(outer.rows() * inner.rows(), outer.cols() * inner.cols());
  for (Eigen::Index i = 0; i < outer.rows(); ++i)
    for (Eigen::Index j = 0; j < outer.cols(); ++j)
      out.block(i * inner.rows(), j * inner.cols(), inner.rows(), inner.cols()) = outer(i, j) * inner;
  return out;
}

struct NormalEquations {
  Matrix gram;       // G, d x d
  Matrix cross;      // H = U^T U, q x q
  Matrix rhs;        // B^T W Y^T U, d x q
  Matrix smoother;   // second-difference D^T D, d x d (empty for ridge)
};

NormalEquations assemble(const RegressionSpace& space, const Matrix& features, const Matrix& responses,
                         const FitConfig& cfg) {
  if (features.rows() == 0) throw InputError("fit: empty cluster");
  if (features.rows() != responses.rows()) throw InputError("fit: feature and response row counts differ");
  if (features.cols() != space.feature_count()) throw InputError("fit: feature width mismatch");
  if (responses.cols() != space.response_grid().size()) throw InputError("fit: response grid mismatch");
  if (!(cfg.lambda >= 0.0)) throw InputError("fit: lambda must be non-negative");

  NormalEquations ne;
  const Matrix& b = space.response_basis().eval();
  ne.gram = space.response_gram();
  ne.cross = features.transpose() * features;
  ne.rhs = b.transpose() * space.response_grid().weights().asDiagonal() * responses.transpose() * features;
  if (cfg.penalty == PenaltyKind::SecondDifference) {
    ne.smoother = second_difference_penalty(space.basis_count());
  }
  return ne;
}

// lambda * dPenalty/2 applied to theta
Matrix apply_penalty(const NormalEquations& ne, const Matrix& theta, const FitConfig& cfg, int d) {
  if (cfg.penalty == PenaltyKind::Ridge) return cfg.lambda * theta;
  Matrix out = ne.smoother * theta;
  const Eigen::Index blocks = (theta.cols() - 1) / d;
  for (Eigen::Index j = 0; j < blocks; ++j) out.middleCols(1 + j * d, d) += theta.middleCols(1 + j * d, d) * ne.smoother;
  return cfg.lambda * out;
}

Matrix penalty_matrix(const NormalEquations& ne, const FitConfig& cfg, int d, Eigen::Index q) {
  const Eigen::Index n = d * q;
  if (cfg.penalty == PenaltyKind::Ridge) return Matrix::Identity(n, n);
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index c = 0; c < q; ++c) p.block(c * d, c * d, d, d) += ne.smoother;
  // s-direction smoothing within each surface block: kron(S, I_d)
  for (Eigen::Index j = 0; 1 + j * d < q; ++j) {
    const Eigen::Index base = 1 + j * d;
    for (Eigen::Index b1 = 0; b1 < d; ++b1)
      for (Eigen::Index b2 = 0; b2 < d; ++b2) {
        const double v = ne.smoother(b1, b2);
        if (v == 0.0) continue;
        for (Eigen::Index a = 0; a < d; ++a) p((base + b1) * d + a, (base + b2) * d + a) += v;
      }
  }
  return p;
}

RegressionCoefficients solve_spectral(const NormalEquations& ne, const FitConfig& cfg) {
  Eigen::SelfAdjointEigenSolver<Matrix> eg(ne.gram);
  Eigen::SelfAdjointEigenSolver<Matrix> eh(ne.cross);
  const Matrix& p = eg.eigenvectors();
  const Matrix& q = eh.eigenvectors();
  Matrix rt = p.transpose() * ne.rhs * q;
  const Vector& g = eg.eigenvalues();
  const Vector& h = eh.eigenvalues();
  const double scale = g.cwiseAbs().maxCoeff() * h.cwiseAbs().maxCoeff() + cfg.lambda;
  const double floor = scale * 1e-13;
  for (Eigen::Index a = 0; a < rt.rows(); ++a) {
    for (Eigen::Index c = 0; c < rt.cols(); ++c) {
      const double denom = std::max(g(a), 0.0) * std::max(h(c), 0.0) + cfg.lambda;
      if (cfg.lambda == 0.0 && denom <= floor) throw NumericalError("fit: singular normal equations (lambda = 0 with rank-deficient design)");
      rt(a, c) /= denom;
    }
  }
  return RegressionCoefficients{p * rt * q.transpose()};
}

}  // namespace

RegressionCoefficients fit_dense(const RegressionSpace& space, const Matrix& features, const Matrix& responses,
                                 const FitConfig& cfg) {
  const NormalEquations ne = assemble(space, features, responses, cfg);
  const int d = space.basis_count();
  const Eigen::Index q = space.feature_count();
  Matrix system = kronecker(ne.cross, ne.gram);
  system += cfg.lambda * penalty_matrix(ne, cfg, d, q);
  Eigen::LLT<Matrix> llt(system);
  const double diag_scale = system.diagonal().cwiseAbs().maxCoeff();
  bool ok = llt.info() == Eigen::Success;
  if (ok && cfg.lambda == 0.0) {
    const Vector dl = Matrix(llt.matrixL()).diagonal();
    ok = dl.minCoeff() > std::sqrt(diag_scale) * 1e-7;
  }
  if (!ok) throw NumericalError("fit: singular normal equations (lambda = 0 with rank-deficient design)");
  const Vector x = llt.solve(ne.rhs.reshaped());
  return RegressionCoefficients{x.reshaped(d, q)};
}

RegressionCoefficients fit_iterative(const RegressionSpace& space, const Matrix& features,
                                     const Matrix& responses, const FitConfig& cfg, double tolerance,
                                     int max_iterations) {
  const NormalEquations ne = assemble(space, features, responses, cfg);
  const int d = space.basis_count();
  auto apply = [&](const Matrix& theta) -> Matrix {
    return ne.gram * theta * ne.cross + apply_penalty(ne, theta, cfg, d);
  };
  Matrix x = Matrix::Zero(d, space.feature_count());
  Matrix r = ne.rhs;
  Matrix dir = r;
  double rr = r.squaredNorm();
  const double target = tolerance * tolerance * ne.rhs.squaredNorm();
  for (int it = 0; it < max_iterations && rr > target; ++it) {
    const Matrix ad = apply(dir);
    const double curvature = (dir.array() * ad.array()).sum();
    if (!(curvature > 0.0)) throw NumericalError("fit_iterative: operator is not positive definite");
    const double alpha = rr / curvature;
    x += alpha * dir;
    r -= alpha * ad;
    const double rr_next = r.squaredNorm();
    dir = r + (rr_next / rr) * dir;
    rr = rr_next;
  }
  if (rr > target) throw NumericalError("fit_iterative: conjugate gradients did not converge");
  return RegressionCoefficients{x};
}

RegressionCoefficients fit(const RegressionSpace& space, const Matrix& features, const Matrix& responses,
                           const FitConfig& cfg) {
  if (cfg.penalty == PenaltyKind::SecondDifference) return fit_dense(space, features, responses, cfg);
  return solve_spectral(assemble(space, features, responses, cfg), cfg);
}

RegressionCoefficients fit(const FunctionalDataset& cluster, const FitConfig& cfg) {
  const RegressionSpace space = RegressionSpace::for_dataset(cluster, cfg);
  return fit(space, space.features(cluster), cluster.response().values(), cfg);
}

double penalized_objective(const RegressionSpace& space, const Matrix& features, const Matrix& responses,
                           const FitConfig& cfg, const RegressionCoefficients& coeffs) {
  const Matrix resid = responses - predict_all(space, coeffs, features);
  const double loss = (resid.array().square().rowwise() * space.response_grid().weights().transpose().array()).sum();
  double pen = coeffs.theta.squaredNorm();
  if (cfg.penalty == PenaltyKind::SecondDifference) {
    const Matrix omega = second_difference_penalty(space.basis_count());
    const Matrix& th = coeffs.theta;
    pen = (th.transpose() * omega * th).trace();
    const int d = space.basis_count();
    for (Eigen::Index j = 0; 1 + j * d < th.cols(); ++j) {
      const auto blk = th.middleCols(1 + j * d, d);
      pen += (blk * omega * blk.transpose()).trace();
    }
  }
  return loss + cfg.lambda * pen;
}

Vector predict(const RegressionSpace& space, const RegressionCoefficients& coeffs,
               const Eigen::Ref<const Vector>& features) {
  if (coeffs.theta.rows() != space.basis_count() || coeffs.theta.cols() != space.feature_count())
    throw InputError("predict: coefficients do not match the regression space");
  if (features.size() != space.feature_count()) throw InputError("predict: feature vector has the wrong length");
  return space.response_basis().eval() * (coeffs.theta * features);
}

Vector predict(const RegressionSpace& space, const RegressionCoefficients& coeffs,
               const std::vector<Vector>& predictor_curves) {
  return predict(space, coeffs, space.features(predictor_curves));
}

Matrix predict_all(const RegressionSpace& space, const RegressionCoefficients& coeffs, const Matrix& features) {
  if (coeffs.theta.rows() != space.basis_count() || coeffs.theta.cols() != space.feature_count())
    throw InputError("predict: coefficients do not match the regression space");
  if (features.cols() != space.feature_count()) throw InputError("predict: feature width mismatch");
  return features * (space.response_basis().eval() * coeffs.theta).transpose();
}

}  // namespace frecl
