#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the solvers they are used to check.

#include "rotcic/measure.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace rotcic::oracle {

/// Minimum over all n! matchings of (1/n) sum ||x_i - y_sigma(i)||^2 for two
/// uniform measures of equal size.
inline double brute_force_matching_cost(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const Eigen::Index n = x.rows();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += (x.row(i) - y.row(perm[static_cast<std::size_t>(i)])).squaredNorm();
    best = std::min(best, total / static_cast<double>(n));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Squared-cost OT between 1D measures as the integral over t in (0,1) of
/// (F^{-1}(t) - G^{-1}(t))^2, evaluated exactly on the merged breakpoints of
/// the two cumulative weight sequences. Quantiles are taken by linear scan.
inline double quantile_integral_1d(std::vector<double> xs, std::vector<double> wx,
                                   std::vector<double> ys, std::vector<double> wy) {
  auto sorted = [](std::vector<double>& v, std::vector<double>& w) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> v2, c;
    double acc = 0.0;
    for (std::size_t i : idx) {
      v2.push_back(v[i]);
      acc += w[i];
      c.push_back(acc);
    }
    v = v2;
    w = c;
  };
  sorted(xs, wx);
  sorted(ys, wy);
  std::vector<double> cuts = wx;
  cuts.insert(cuts.end(), wy.begin(), wy.end());
  cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  auto q = [](const std::vector<double>& v, const std::vector<double>& c, double t) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (c[i] >= t) return v[i];
    }
    return v.back();
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = std::min(cuts[i + 1], 1.0);
    if (hi - lo <= 1e-15) continue;
    const double mid = 0.5 * (lo + hi);
    const double diff = q(xs, wx, mid) - q(ys, wy, mid);
    total += (hi - lo) * diff * diff;
  }
  return total;
}

/// Central finite-difference gradient.
inline Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                                  const Eigen::VectorXd& at, double h = 1e-6) {
  Eigen::VectorXd g(at.size());
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    Eigen::VectorXd plus = at;
    Eigen::VectorXd minus = at;
    plus[i] += h;
    minus[i] -= h;
    g[i] = (f(plus) - f(minus)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd gaussian_points(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng,
                                       double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd p(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) p(i, j) = g(rng);
  }
  return p;
}

/// Weights k_i / sum k with integer k_i in [1, 10], exactly normalized up to
/// one rounding per entry.
inline Eigen::VectorXd rational_weights(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(1, 10);
  Eigen::VectorXd w(n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) total += (w[i] = pick(rng));
  return w / total;
}

inline Eigen::MatrixXd random_rotation(Eigen::Index d, std::mt19937_64& rng) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_points(d, d, rng));
  return qr.householderQ();
}

}  // namespace rotcic::oracle
