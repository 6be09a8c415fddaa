#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace frecl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class NormKind { L1, L2 };

/// Raised when an input violates a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for singular systems and other failures of the numerics.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Trapezoidal quadrature weights for strictly increasing points.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> trapezoid_weights(
    const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = points.size();
  if (n < 2) throw InputError("trapezoid_weights: need at least 2 points");
  for (Eigen::Index q = 1; q < n; ++q) {
    if (!(points(q) > points(q - 1)))
      throw InputError("trapezoid_weights: points must be strictly increasing");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w(n);
  w(0) = (points(1) - points(0)) / Scalar(2);
  w(n - 1) = (points(n - 1) - points(n - 2)) / Scalar(2);
  for (Eigen::Index q = 1; q + 1 < n; ++q) w(q) = (points(q + 1) - points(q - 1)) / Scalar(2);
  return w;
}

/// Observation times with their quadrature weights; the discretized domain.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(Vector points);

  const Vector& points() const { return points_; }
  const Vector& weights() const { return weights_; }
  Eigen::Index size() const { return points_.size(); }
  double start() const { return points_(0); }
  double end() const { return points_(points_.size() - 1); }

  /// `n` equidistant points from `first` to `last` inclusive.
  static TimeGrid uniform(double first, double last, Eigen::Index n);

  bool operator==(const TimeGrid& other) const { return points_ == other.points_; }

 private:
  Vector points_;
  Vector weights_;
};

/// Weighted L1 or L2 norm of a grid-sampled curve.
template <typename Derived>
typename Derived::Scalar curve_norm(const Eigen::MatrixBase<Derived>& curve, const TimeGrid& grid,
                                    NormKind kind) {
  if (curve.size() != grid.size()) throw InputError("curve_norm: curve length does not match grid");
  const auto& w = grid.weights();
  if (kind == NormKind::L1) return (w.array() * curve.derived().array().abs()).sum();
  return std::sqrt((w.array() * curve.derived().array().square()).sum());
}

/// m curves sampled on one grid; row i holds curve i.
class CurveSet {
 public:
  CurveSet() = default;
  CurveSet(TimeGrid grid, Matrix values);

  const TimeGrid& grid() const { return grid_; }
  const Matrix& values() const { return values_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index points() const { return values_.cols(); }
  auto row(Eigen::Index i) const { return values_.row(i); }

  CurveSet select(const std::vector<Eigen::Index>& rows) const;

 private:
  TimeGrid grid_;
  Matrix values_;
};

/// Response curves plus p predictor curve sets over the same m observations.
class FunctionalDataset {
 public:
  FunctionalDataset() = default;
  FunctionalDataset(CurveSet response, std::vector<CurveSet> predictors,
                    std::vector<std::string> ids = {});

  const CurveSet& response() const { return response_; }
  const std::vector<CurveSet>& predictors() const { return predictors_; }
  const CurveSet& predictor(std::size_t j) const { return predictors_.at(j); }
  std::size_t predictor_count() const { return predictors_.size(); }
  Eigen::Index size() const { return response_.rows(); }
  const std::vector<std::string>& ids() const { return ids_; }

  FunctionalDataset select(const std::vector<Eigen::Index>& rows) const;

 private:
  CurveSet response_;
  std::vector<CurveSet> predictors_;
  std::vector<std::string> ids_;
};

/// Subtracts the pointwise mean curve from every row.
CurveSet center_curves(const CurveSet& cs);

/// Local polynomial regression with tricube weights over the span-nearest
/// neighbours, evaluated at `at` (which need not coincide with the grid).
CurveSet loess_smooth_at(const CurveSet& cs, const TimeGrid& at, double span = 0.75, int degree = 2);

inline CurveSet loess_smooth(const CurveSet& cs, double span = 0.75, int degree = 2) {
  return loess_smooth_at(cs, cs.grid(), span, degree);
}

/// The grid with every interval midpoint inserted (2T - 1 points).
TimeGrid with_midpoints(const TimeGrid& grid);

/// Pointwise median over replicates; `replicates[q]` holds the values at time q.
Vector median_collapse(const std::vector<std::vector<double>>& replicates);

/// Rows that exceed `threshold` at `min_points` or more grid points in every season.
std::vector<Eigen::Index> expression_filter(const std::vector<Matrix>& seasons, double threshold = 5.0,
                                            int min_points = 20);

}  // namespace frecl
