#include "rotcic/measure.hpp"

#include "rotcic/error.hpp"

#include <cmath>
#include <string>

namespace rotcic {

EmpiricalMeasure::EmpiricalMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.rows() < 1) throw InvalidInput("empirical measure needs at least one atom");
  if (points_.cols() < 1) throw InvalidInput("empirical measure needs dimension >= 1");
  if (weights_.size() != points_.rows()) {
    throw InvalidInput("weight count " + std::to_string(weights_.size()) +
                       " does not match atom count " + std::to_string(points_.rows()));
  }
  if (!points_.allFinite()) throw InvalidInput("empirical measure has non-finite coordinates");
  for (Index i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw InvalidInput("weights must be finite and nonnegative");
    }
  }
  const double total = accurate_sum({weights_.data(), static_cast<std::size_t>(weights_.size())});
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw InvalidInput("weights sum to " + std::to_string(total) + ", expected 1");
  }
}

double accurate_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

EmpiricalMeasure EmpiricalMeasure::uniform(Eigen::MatrixXd points) {
  const Index n = points.rows();
  if (n < 1) throw InvalidInput("empirical measure needs at least one atom");
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  return {std::move(points), std::move(w)};
}

EmpiricalMeasure EmpiricalMeasure::from_values(std::span<const double> values) {
  Eigen::MatrixXd pts(static_cast<Index>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i) pts(static_cast<Index>(i), 0) = values[i];
  return uniform(std::move(pts));
}

EmpiricalMeasure EmpiricalMeasure::from_values(std::span<const double> values,
                                               std::span<const double> weights) {
  if (values.size() != weights.size()) throw InvalidInput("values and weights differ in length");
  Eigen::MatrixXd pts(static_cast<Index>(values.size()), 1);
  Eigen::VectorXd w(static_cast<Index>(weights.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    pts(static_cast<Index>(i), 0) = values[i];
    w[static_cast<Index>(i)] = weights[i];
  }
  return {std::move(pts), std::move(w)};
}

bool EmpiricalMeasure::is_uniform() const noexcept {
  const double w0 = weights_[0];
  for (Index i = 1; i < weights_.size(); ++i) {
    if (weights_[i] != w0) return false;
  }
  return true;
}

EmpiricalMeasure EmpiricalMeasure::translated(const Eigen::VectorXd& shift) const {
  if (shift.size() != dim()) throw InvalidInput("translation vector has wrong dimension");
  Eigen::MatrixXd moved = points_.rowwise() + shift.transpose();
  return {std::move(moved), weights_};
}

EmpiricalMeasure EmpiricalMeasure::select_dims(std::span<const Index> dims) const {
  if (dims.empty()) throw InvalidInput("dimension selection is empty");
  Eigen::MatrixXd sub(size(), static_cast<Index>(dims.size()));
  for (std::size_t c = 0; c < dims.size(); ++c) {
    if (dims[c] < 0 || dims[c] >= dim()) throw InvalidInput("selected dimension out of range");
    sub.col(static_cast<Index>(c)) = points_.col(dims[c]);
  }
  return {std::move(sub), weights_};
}

Eigen::VectorXd EmpiricalMeasure::mean() const {
  return points_.transpose() * weights_;
}

void require_same_dim(const EmpiricalMeasure& a, const EmpiricalMeasure& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                       " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace rotcic
