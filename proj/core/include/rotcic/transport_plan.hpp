#pragma once

#include "rotcic/measure.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <vector>

namespace rotcic {

using SparsePlan = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using PlanEntry = Eigen::Triplet<double>;

/// A nonnegative coupling between n source atoms and m target atoms.
///
/// The coupling is stored sparsely: exact solvers return basic solutions with
/// at most n + m - 1 nonzeros. Construction checks shapes and nonnegativity;
/// marginal accuracy is a property of the solver and is queried with
/// marginal_violation().
class TransportPlan {
 public:
  static constexpr double kMarginalTolerance = 1e-8;

  TransportPlan(SparsePlan coupling, Eigen::VectorXd source_weights,
                Eigen::VectorXd target_weights);

  static TransportPlan from_entries(Index rows, Index cols, const std::vector<PlanEntry>& entries,
                                    Eigen::VectorXd source_weights,
                                    Eigen::VectorXd target_weights);

  Index rows() const noexcept { return coupling_.rows(); }
  Index cols() const noexcept { return coupling_.cols(); }

  const SparsePlan& coupling() const noexcept { return coupling_; }
  const Eigen::VectorXd& source_weights() const noexcept { return source_weights_; }
  const Eigen::VectorXd& target_weights() const noexcept { return target_weights_; }

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(coupling_); }
  Eigen::VectorXd row_sums() const;
  Eigen::VectorXd col_sums() const;

  /// Largest absolute deviation of a row or column sum from its prescribed marginal.
  double marginal_violation() const;
  bool satisfies_marginals(double tol = kMarginalTolerance) const {
    return marginal_violation() <= tol;
  }

  /// sum_ij pi_ij * ||x_i - y_j||^2
  double cost(const EmpiricalMeasure& source, const EmpiricalMeasure& target) const;

 private:
  SparsePlan coupling_;
  Eigen::VectorXd source_weights_;
  Eigen::VectorXd target_weights_;
};

}  // namespace rotcic
