#pragma once

#include <vector>

#include "frecl/bspline.hpp"
#include "frecl/fda_core.hpp"

namespace frecl {

enum class PenaltyKind { Ridge, SecondDifference };

struct FitConfig {
  double lambda = 1e-2;
  int basis_count = 12;
  int basis_order = 4;
  PenaltyKind penalty = PenaltyKind::Ridge;
};

// Coefficient layout
// ------------------
// For d basis functions and p predictors the model is stored as a d x q
// matrix theta, q = 1 + p d. Column 0 holds the intercept expansion
// beta_0(t) = sum_a theta(a, 0) B_a(t); column 1 + j d + b holds
// c_{j a b} of beta_j(t, s) = sum_{a,b} c_{jab} B_a(t) B_b(s).
// Each observation is summarised by its feature vector
//   u = [1, z_1, ..., z_p],  z_{jb} = sum_s w_s B_b(s) X_j(s),
// so the discretized conditional mean is  Phi(t_r) = B(t_r)^T theta u.

struct RegressionCoefficients {
  Matrix theta;

  int basis_count() const { return static_cast<int>(theta.rows()); }
  std::size_t predictor_count() const {
    return theta.rows() == 0 ? 0 : static_cast<std::size_t>((theta.cols() - 1) / theta.rows());
  }
  auto intercept() const { return theta.col(0); }
  auto surface(std::size_t j) const {
    const auto d = theta.rows();
    return theta.block(0, 1 + static_cast<Eigen::Index>(j) * d, d, d);
  }
  /// Column-major flattening; matches the column order of `RegressionSpace::design_rows`.
  Vector flattened() const { return theta.reshaped(); }
};

/// Bases and quadrature projections shared by every fit on one set of grids.
class RegressionSpace {
 public:
  RegressionSpace(const TimeGrid& response_grid, const std::vector<TimeGrid>& predictor_grids,
                  int basis_count = 12, int basis_order = 4);

  static RegressionSpace for_dataset(const FunctionalDataset& data, const FitConfig& cfg);

  int basis_count() const { return basis_count_; }
  std::size_t predictor_count() const { return predictor_bases_.size(); }
  Eigen::Index feature_count() const { return 1 + static_cast<Eigen::Index>(predictor_count()) * basis_count_; }
  Eigen::Index coefficient_count() const { return basis_count_ * feature_count(); }

  const TimeGrid& response_grid() const { return response_grid_; }
  const BSplineBasis& response_basis() const { return response_basis_; }
  const BSplineBasis& predictor_basis(std::size_t j) const { return predictor_bases_.at(j); }

  /// Feature vector u for one observation's predictor curves.
  Vector features(const std::vector<Vector>& predictor_curves) const;
  /// m x q matrix of feature vectors, one row per observation.
  Matrix features(const FunctionalDataset& data) const;

  /// T x (d q) per-time-point design rows; row r dotted with the flattened
  /// coefficients gives Phi(t_r).
  Matrix design_rows(const Eigen::Ref<const Vector>& u) const;

  /// B^T W B on the response grid.
  const Matrix& response_gram() const { return gram_; }

 private:
  TimeGrid response_grid_;
  int basis_count_;
  BSplineBasis response_basis_;
  std::vector<BSplineBasis> predictor_bases_;
  std::vector<TimeGrid> predictor_grids_;
  std::vector<Matrix> projections_;  // d x T_j, rows are w .* B_b
  Matrix gram_;
};

/// Penalized least-squares fit on one cluster. `features` holds the cluster's
/// rows of `RegressionSpace::features`, `responses` the matching response curves.
/// Ridge uses a spectral solve of the Kronecker-structured normal equations;
/// the second-difference penalty uses the dense Cholesky route.
RegressionCoefficients fit(const RegressionSpace& space, const Matrix& features, const Matrix& responses,
                           const FitConfig& cfg);

/// Same objective assembled as an explicit (d q) x (d q) system and solved by Cholesky.
RegressionCoefficients fit_dense(const RegressionSpace& space, const Matrix& features, const Matrix& responses,
                                 const FitConfig& cfg);

/// Same objective solved matrix-free by conjugate gradients.
RegressionCoefficients fit_iterative(const RegressionSpace& space, const Matrix& features,
                                     const Matrix& responses, const FitConfig& cfg, double tolerance = 1e-12,
                                     int max_iterations = 10000);

RegressionCoefficients fit(const FunctionalDataset& cluster, const FitConfig& cfg);

/// Weighted squared loss plus penalty, the quantity every fit minimizes.
double penalized_objective(const RegressionSpace& space, const Matrix& features, const Matrix& responses,
                           const FitConfig& cfg, const RegressionCoefficients& coeffs);

Vector predict(const RegressionSpace& space, const RegressionCoefficients& coeffs,
               const Eigen::Ref<const Vector>& features);
Vector predict(const RegressionSpace& space, const RegressionCoefficients& coeffs,
               const std::vector<Vector>& predictor_curves);
/// m x T predictions for a block of feature rows.
Matrix predict_all(const RegressionSpace& space, const RegressionCoefficients& coeffs, const Matrix& features);

template <typename A, typename B>
double residual_norm(const Eigen::MatrixBase<A>& y, const Eigen::MatrixBase<B>& yhat, const TimeGrid& grid,
                     NormKind kind) {
  if (y.size() != yhat.size()) throw InputError("residual_norm: length mismatch");
  return curve_norm((y.derived() - yhat.derived()).eval(), grid, kind);
}

}  // namespace frecl
