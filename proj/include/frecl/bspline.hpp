#pragma once

#include "frecl/fda_core.hpp"

namespace frecl {

/// Clamped B-spline basis with equally spaced interior knots, evaluated on a grid.
class BSplineBasis {
 public:
  BSplineBasis() = default;
  BSplineBasis(const TimeGrid& grid, int count, int order);

  int order() const { return order_; }
  int count() const { return count_; }
  const Vector& knots() const { return knots_; }

  /// T x d matrix of basis values at the grid points.
  const Matrix& eval() const { return eval_; }

  /// Basis values at arbitrary points inside the knot span.
  Matrix evaluate(const Eigen::Ref<const Vector>& at) const;

 private:
  int order_ = 0;
  int count_ = 0;
  Vector knots_;
  Matrix eval_;
};

inline BSplineBasis build_basis(const TimeGrid& grid, int count = 12, int order = 4) {
  return BSplineBasis(grid, count, order);
}

/// D^T D for the (d-2) x d second-difference operator D; zero when d < 3.
Matrix second_difference_penalty(int d);

}  // namespace frecl
