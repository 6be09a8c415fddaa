#include "frecl/fda_core.hpp"

#include <algorithm>
#include <numeric>

namespace frecl {

TimeGrid::TimeGrid(Vector points) : points_(std::move(points)) {
  weights_ = trapezoid_weights(points_);
}

TimeGrid TimeGrid::uniform(double first, double last, Eigen::Index n) {
  return TimeGrid(Vector::LinSpaced(n, first, last));
}

CurveSet::CurveSet(TimeGrid grid, Matrix values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.cols() != grid_.size())
    throw InputError("CurveSet: column count " + std::to_string(values_.cols()) +
                     " does not match grid size " + std::to_string(grid_.size()));
  if (!values_.allFinite()) throw InputError("CurveSet: values must be finite");
}

CurveSet CurveSet::select(const std::vector<Eigen::Index>& rows) const {
  Matrix out(static_cast<Eigen::Index>(rows.size()), values_.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = values_.row(rows[r]);
  return CurveSet(grid_, std::move(out));
}

FunctionalDataset::FunctionalDataset(CurveSet response, std::vector<CurveSet> predictors,
                                     std::vector<std::string> ids)
    : response_(std::move(response)), predictors_(std::move(predictors)), ids_(std::move(ids)) {
  for (const auto& x : predictors_) {
    if (x.rows() != response_.rows())
      throw InputError("FunctionalDataset: predictor row count differs from response");
  }
  if (ids_.empty()) {
    ids_.reserve(static_cast<std::size_t>(response_.rows()));
    for (Eigen::Index i = 0; i < response_.rows(); ++i) ids_.push_back(std::to_string(i + 1));
  } else if (static_cast<Eigen::Index>(ids_.size()) != response_.rows()) {
    throw InputError("FunctionalDataset: id count differs from row count");
  }
}

FunctionalDataset FunctionalDataset::select(const std::vector<Eigen::Index>& rows) const {
  std::vector<CurveSet> xs;
  xs.reserve(predictors_.size());
  for (const auto& x : predictors_) xs.push_back(x.select(rows));
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (auto r : rows) ids.push_back(ids_[static_cast<std::size_t>(r)]);
  return FunctionalDataset(response_.select(rows), std::move(xs), std::move(ids));
}

CurveSet center_curves(const CurveSet& cs) {
  if (cs.rows() < 1) throw InputError("center_curves: empty curve set");
  const Eigen::RowVectorXd mean = cs.values().colwise().mean();
  Matrix out = cs.values().rowwise() - mean;
  return CurveSet(cs.grid(), std::move(out));
}

namespace {

double loess_point(const Vector& x, const Eigen::Ref<const Vector>& y, double x0, Eigen::Index q,
                   int degree) {
  const Eigen::Index n = x.size();
  Vector dist = (x.array() - x0).abs();
  std::vector<double> sorted(dist.data(), dist.data() + n);
  std::nth_element(sorted.begin(), sorted.begin() + (q - 1), sorted.end());
  const double radius = sorted[static_cast<std::size_t>(q - 1)];

  std::vector<Eigen::Index> local;
  std::vector<double> weight;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (radius <= 0.0) {
      if (dist(k) == 0.0) {
        local.push_back(k);
        weight.push_back(1.0);
      }
      continue;
    }
    const double u = dist(k) / radius;
    if (u < 1.0) {
      const double c = 1.0 - u * u * u;
      local.push_back(k);
      weight.push_back(c * c * c);
    }
  }
  const auto nl = static_cast<Eigen::Index>(local.size());
  if (nl < degree + 1) throw InputError("loess_smooth: span leaves too few points for the local fit");

  const double scale = radius > 0.0 ? radius : 1.0;
  Matrix design(nl, degree + 1);
  Vector rhs(nl);
  for (Eigen::Index r = 0; r < nl; ++r) {
    const double sw = std::sqrt(weight[static_cast<std::size_t>(r)]);
    const double u = (x(local[static_cast<std::size_t>(r)]) - x0) / scale;
    double pw = 1.0;
    for (int c = 0; c <= degree; ++c) {
      design(r, c) = sw * pw;
      pw *= u;
    }
    rhs(r) = sw * y(local[static_cast<std::size_t>(r)]);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < degree + 1) throw InputError("loess_smooth: local design is rank deficient");
  return qr.solve(rhs)(0);
}

}  // namespace

CurveSet loess_smooth_at(const CurveSet& cs, const TimeGrid& at, double span, int degree) {
  if (!(span > 0.0 && span <= 1.0)) throw InputError("loess_smooth: span must lie in (0, 1]");
  if (degree < 0) throw InputError("loess_smooth: degree must be non-negative");
  const Vector& x = cs.grid().points();
  const Eigen::Index n = x.size();
  const auto q = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::floor(span * static_cast<double>(n))));
  Matrix out(cs.rows(), at.size());
  for (Eigen::Index i = 0; i < cs.rows(); ++i) {
    const Vector y = cs.values().row(i).transpose();
    for (Eigen::Index r = 0; r < at.size(); ++r) out(i, r) = loess_point(x, y, at.points()(r), q, degree);
  }
  return CurveSet(at, std::move(out));
}

TimeGrid with_midpoints(const TimeGrid& grid) {
  const Eigen::Index n = grid.size();
  Vector pts(2 * n - 1);
  for (Eigen::Index q = 0; q < n; ++q) {
    pts(2 * q) = grid.points()(q);
    if (q + 1 < n) pts(2 * q + 1) = 0.5 * (grid.points()(q) + grid.points()(q + 1));
  }
  return TimeGrid(std::move(pts));
}

Vector median_collapse(const std::vector<std::vector<double>>& replicates) {
  Vector out(static_cast<Eigen::Index>(replicates.size()));
  for (std::size_t q = 0; q < replicates.size(); ++q) {
    std::vector<double> v = replicates[q];
    if (v.empty()) throw InputError("median_collapse: no replicates at time index " + std::to_string(q));
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    out(static_cast<Eigen::Index>(q)) = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  }
  return out;
}

std::vector<Eigen::Index> expression_filter(const std::vector<Matrix>& seasons, double threshold,
                                            int min_points) {
  std::vector<Eigen::Index> kept;
  if (seasons.empty()) return kept;
  const Eigen::Index m = seasons.front().rows();
  for (const auto& s : seasons) {
    if (s.rows() != m) throw InputError("expression_filter: seasons differ in row count");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool keep = std::all_of(seasons.begin(), seasons.end(), [&](const Matrix& s) {
      return (s.row(i).array() > threshold).count() >= min_points;
    });
    if (keep) kept.push_back(i);
  }
  return kept;
}

}  // namespace frecl
