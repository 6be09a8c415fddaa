#include "frecl/bspline.hpp"

#include <algorithm>

namespace frecl {

BSplineBasis::BSplineBasis(const TimeGrid& grid, int count, int order) : order_(order), count_(count) {
  if (order < 1) throw InputError("build_basis: order must be at least 1");
  if (count < order) throw InputError("build_basis: basis count must be at least the order");
  if (grid.size() < 2) throw InputError("build_basis: grid needs at least 2 points");

  const double a = grid.start();
  const double b = grid.end();
  const int interior = count - order;
  knots_.resize(count + order);
  for (int i = 0; i < order; ++i) {
    knots_(i) = a;
    knots_(count + i) = b;
  }
  for (int i = 1; i <= interior; ++i) knots_(order - 1 + i) = a + (b - a) * i / (interior + 1);

  eval_ = evaluate(grid.points());
}

Matrix BSplineBasis::evaluate(const Eigen::Ref<const Vector>& at) const {
  const double a = knots_(0);
  const double b = knots_(knots_.size() - 1);
  Matrix out = Matrix::Zero(at.size(), count_);
  Vector local(order_);
  for (Eigen::Index r = 0; r < at.size(); ++r) {
    const double x = std::clamp(at(r), a, b);
    // knot span: knots_(span) <= x < knots_(span + 1), right end folded into the last span
    int span = order_ - 1;
    while (span < count_ - 1 && x >= knots_(span + 1)) ++span;

    // Cox-de Boor on the `order_` functions supported on this span
    local.setZero();
    local(0) = 1.0;
    for (int deg = 1; deg < order_; ++deg) {
      double saved = 0.0;
      for (int j = 0; j < deg; ++j) {
        const double left = knots_(span + j + 1 - deg);
        const double right = knots_(span + j + 1);
        const double term = right > left ? local(j) / (right - left) : 0.0;
        local(j) = saved + (right - x) * term;
        saved = (x - left) * term;
      }
      local(deg) = saved;
    }
    for (int j = 0; j < order_; ++j) out(r, span - order_ + 1 + j) = local(j);
  }
  return out;
}

Matrix second_difference_penalty(int d) {
  if (d < 3) return Matrix::Zero(d, d);
  Matrix diff = Matrix::Zero(d - 2, d);
  for (int i = 0; i < d - 2; ++i) {
    diff(i, i) = 1.0;
    diff(i, i + 1) = -2.0;
    diff(i, i + 2) = 1.0;
  }
  return diff.transpose() * diff;
}

}  // namespace frecl
