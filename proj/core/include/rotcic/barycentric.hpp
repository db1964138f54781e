#pragma once

#include "rotcic/measure.hpp"
#include "rotcic/transport_plan.hpp"

#include <vector>

namespace rotcic {

/// Row i of the result is sum_j pi_ij y_j / sum_j pi_ij. A row carrying a
/// single atom maps exactly onto that target atom.
Eigen::MatrixXd barycentric_map(const TransportPlan& plan, const EmpiricalMeasure& target);

/// Index of the closest row of `atoms` (squared Euclidean) for each row of
/// `queries`; ties go to the lowest index.
std::vector<Index> nearest_atoms(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& atoms);

}  // namespace rotcic
