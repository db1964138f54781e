#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace rotcic {

using Index = Eigen::Index;

/// A weighted finite point set in R^d.
///
/// Points are stored as the rows of an n x d matrix. Construction checks the
/// invariants (n >= 1, d >= 1, finite coordinates, nonnegative weights summing
/// to one within 1e-12); instances are immutable afterwards.
class EmpiricalMeasure {
 public:
  static constexpr double kWeightTolerance = 1e-12;

  EmpiricalMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights);

  /// Equal weights 1/n on every row of `points`.
  static EmpiricalMeasure uniform(Eigen::MatrixXd points);

  /// One-dimensional measure from scalar atoms.
  static EmpiricalMeasure from_values(std::span<const double> values);
  static EmpiricalMeasure from_values(std::span<const double> values,
                                      std::span<const double> weights);

  Index size() const noexcept { return points_.rows(); }
  Index dim() const noexcept { return points_.cols(); }

  const Eigen::MatrixXd& points() const noexcept { return points_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  auto point(Index i) const { return points_.row(i); }
  double weight(Index i) const { return weights_[i]; }

  bool is_uniform() const noexcept;

  /// Same measure with every atom shifted by `shift`.
  EmpiricalMeasure translated(const Eigen::VectorXd& shift) const;

  /// Keeps only the listed coordinates, in the given order.
  EmpiricalMeasure select_dims(std::span<const Index> dims) const;

  /// Weighted mean of the atoms.
  Eigen::VectorXd mean() const;

 private:
  Eigen::MatrixXd points_;
  Eigen::VectorXd weights_;
};

/// Compensated (Neumaier) sum; exact enough to check that many small
/// weights add up to one.
double accurate_sum(std::span<const double> values);

/// Throws InvalidInput unless both measures have the same dimension.
void require_same_dim(const EmpiricalMeasure& a, const EmpiricalMeasure& b, const char* what);

}  // namespace rotcic
