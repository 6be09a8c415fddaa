#pragma once

// Straightforward reference implementations used to check the library.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "frecl/fda_core.hpp"
#include "frecl/partition.hpp"

namespace oracle {

struct Pairs {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Enumerates all unordered pairs.
inline Pairs brute_pairs(const std::vector<int>& truth, const std::vector<int>& est) {
  Pairs c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t j = i + 1; j < truth.size(); ++j) {
      const bool t = truth[i] == truth[j];
      const bool e = est[i] == est[j];
      if (t && e) ++c.tp;
      else if (!t && e) ++c.fp;
      else if (t && !e) ++c.fn;
      else ++c.tn;
    }
  }
  return c;
}

/// Pair-count form of the adjusted Rand index.
inline double brute_ari(const std::vector<int>& truth, const std::vector<int>& est) {
  const Pairs c = brute_pairs(truth, est);
  const double a = static_cast<double>(c.tp), b = static_cast<double>(c.fp), cc = static_cast<double>(c.fn),
               d = static_cast<double>(c.tn);
  const double den = (a + cc) * (cc + d) + (a + b) * (b + d);
  if (den == 0.0) return truth == est || frecl::Partition(truth).same_clustering(frecl::Partition(est)) ? 1.0 : 0.0;
  return 2.0 * (a * d - b * cc) / den;
}

inline double brute_ri(const std::vector<int>& truth, const std::vector<int>& est) {
  const Pairs c = brute_pairs(truth, est);
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.tp + c.fp + c.fn + c.tn);
}

/// Clamped B-spline B_{a,order} at x by the textbook recursion.
inline double bspline(const std::vector<double>& knots, int a, int order, double x) {
  if (order == 1) {
    const double lo = knots[static_cast<std::size_t>(a)], hi = knots[static_cast<std::size_t>(a) + 1];
    if (lo <= x && x < hi) return 1.0;
    // closed right end for the last non-degenerate interval
    if (x == knots.back() && hi == knots.back() && lo < hi) return 1.0;
    return 0.0;
  }
  double v = 0.0;
  const auto k = [&](int i) { return knots[static_cast<std::size_t>(i)]; };
  const double d1 = k(a + order - 1) - k(a);
  const double d2 = k(a + order) - k(a + 1);
  if (d1 > 0.0) v += (x - k(a)) / d1 * bspline(knots, a, order - 1, x);
  if (d2 > 0.0) v += (k(a + order) - x) / d2 * bspline(knots, a + 1, order - 1, x);
  return v;
}

inline std::vector<double> clamped_knots(double lo, double hi, int count, int order) {
  std::vector<double> kn;
  for (int i = 0; i < order; ++i) kn.push_back(lo);
  const int interior = count - order;
  for (int i = 1; i <= interior; ++i) kn.push_back(lo + (hi - lo) * i / (interior + 1));
  for (int i = 0; i < order; ++i) kn.push_back(hi);
  return kn;
}

/// T x d basis matrix from the recursion.
inline Eigen::MatrixXd basis_matrix(const Eigen::VectorXd& t, int count, int order) {
  const auto kn = clamped_knots(t(0), t(t.size() - 1), count, order);
  Eigen::MatrixXd b(t.size(), count);
  for (Eigen::Index r = 0; r < t.size(); ++r)
    for (int a = 0; a < count; ++a) b(r, a) = bspline(kn, a, order, t(r));
  return b;
}

/// Trapezoid weights written out directly.
inline Eigen::VectorXd trapezoid(const Eigen::VectorXd& t) {
  const Eigen::Index n = t.size();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (Eigen::Index q = 0; q + 1 < n; ++q) {
    w(q) += 0.5 * (t(q + 1) - t(q));
    w(q + 1) += 0.5 * (t(q + 1) - t(q));
  }
  return w;
}

/// Feature vector [1, z_1, ..., z_p] by explicit double loops.
inline Eigen::VectorXd features(const std::vector<Eigen::VectorXd>& x, const std::vector<Eigen::VectorXd>& grids,
                                int count, int order) {
  Eigen::VectorXd u(1 + static_cast<Eigen::Index>(x.size()) * count);
  u(0) = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Eigen::MatrixXd b = basis_matrix(grids[j], count, order);
    const Eigen::VectorXd w = trapezoid(grids[j]);
    for (int bb = 0; bb < count; ++bb) {
      double z = 0.0;
      for (Eigen::Index s = 0; s < grids[j].size(); ++s) z += w(s) * b(s, bb) * x[j](s);
      u(1 + static_cast<Eigen::Index>(j) * count + bb) = z;
    }
  }
  return u;
}

/// Phi(t_r) = sum_a B_a(t_r) sum_c theta(a, c) u_c, looping over every term.
inline Eigen::VectorXd predict(const Eigen::MatrixXd& theta, const Eigen::VectorXd& u, const Eigen::VectorXd& t,
                               int order) {
  const Eigen::MatrixXd b = basis_matrix(t, static_cast<int>(theta.rows()), order);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(t.size());
  for (Eigen::Index r = 0; r < t.size(); ++r)
    for (Eigen::Index a = 0; a < theta.rows(); ++a)
      for (Eigen::Index c = 0; c < theta.cols(); ++c) out(r) += b(r, a) * theta(a, c) * u(c);
  return out;
}

/// Penalized least squares solved from an explicitly assembled design:
/// one row per (observation, time point), column a + d c for theta(a, c).
/// `penalty` is the full (d q) x (d q) quadratic form.
inline Eigen::VectorXd normal_equations(const std::vector<Eigen::VectorXd>& feats, const Eigen::MatrixXd& y,
                                        const Eigen::VectorXd& t, int count, int order, double lambda,
                                        const Eigen::MatrixXd& penalty) {
  const Eigen::MatrixXd b = basis_matrix(t, count, order);
  const Eigen::VectorXd w = trapezoid(t);
  const Eigen::Index q = feats.front().size();
  const Eigen::Index n = count * q;
  Eigen::MatrixXd lhs = lambda * penalty;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < feats.size(); ++i) {
    for (Eigen::Index r = 0; r < t.size(); ++r) {
      Eigen::VectorXd row(n);
      for (Eigen::Index c = 0; c < q; ++c)
        for (int a = 0; a < count; ++a) row(a + count * c) = b(r, a) * feats[i](c);
      lhs += w(r) * row * row.transpose();
      rhs += w(r) * y(static_cast<Eigen::Index>(i), r) * row;
    }
  }
  return lhs.fullPivLu().solve(rhs);
}

}  // namespace oracle
