#include "rotcic/transport_plan.hpp"

#include "rotcic/error.hpp"

#include <algorithm>
#include <cmath>

namespace rotcic {

TransportPlan::TransportPlan(SparsePlan coupling, Eigen::VectorXd source_weights,
                             Eigen::VectorXd target_weights)
    : coupling_(std::move(coupling)),
      source_weights_(std::move(source_weights)),
      target_weights_(std::move(target_weights)) {
  if (coupling_.rows() != source_weights_.size() || coupling_.cols() != target_weights_.size()) {
    throw InvalidInput("transport plan shape does not match its marginals");
  }
  coupling_.makeCompressed();
  const double* values = coupling_.valuePtr();
  for (Index k = 0; k < coupling_.nonZeros(); ++k) {
    if (!(values[k] >= 0.0)) throw InvalidInput("transport plan has a negative entry");
  }
}

TransportPlan TransportPlan::from_entries(Index rows, Index cols,
                                          const std::vector<PlanEntry>& entries,
                                          Eigen::VectorXd source_weights,
                                          Eigen::VectorXd target_weights) {
  SparsePlan coupling(rows, cols);
  coupling.setFromTriplets(entries.begin(), entries.end());
  return {std::move(coupling), std::move(source_weights), std::move(target_weights)};
}

Eigen::VectorXd TransportPlan::row_sums() const {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(rows());
  for (Index i = 0; i < coupling_.outerSize(); ++i) {
    for (SparsePlan::InnerIterator it(coupling_, i); it; ++it) sums[i] += it.value();
  }
  return sums;
}

Eigen::VectorXd TransportPlan::col_sums() const {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(cols());
  for (Index i = 0; i < coupling_.outerSize(); ++i) {
    for (SparsePlan::InnerIterator it(coupling_, i); it; ++it) sums[it.col()] += it.value();
  }
  return sums;
}

double TransportPlan::marginal_violation() const {
  const double rows_dev = (row_sums() - source_weights_).cwiseAbs().maxCoeff();
  const double cols_dev = (col_sums() - target_weights_).cwiseAbs().maxCoeff();
  return std::max(rows_dev, cols_dev);
}

double TransportPlan::cost(const EmpiricalMeasure& source, const EmpiricalMeasure& target) const {
  if (source.size() != rows() || target.size() != cols()) {
    throw InvalidInput("transport plan does not match the measures it is evaluated on");
  }
  require_same_dim(source, target, "plan cost");
  double total = 0.0;
  for (Index i = 0; i < coupling_.outerSize(); ++i) {
    for (SparsePlan::InnerIterator it(coupling_, i); it; ++it) {
      total += it.value() * (source.point(i) - target.point(it.col())).squaredNorm();
    }
  }
  return total;
}

}  // namespace rotcic
