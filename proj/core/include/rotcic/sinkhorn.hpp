#pragma once

#include "rotcic/measure.hpp"
#include "rotcic/transport_plan.hpp"

namespace rotcic {

struct SinkhornOptions {
  double lambda = 30.0;  // weight of the entropy term
  int max_iter = 10000;
  double tol = 1e-6;     // stop once the largest marginal violation drops below this
  /// Warm start from a geometric sequence of larger lambdas (halving from the
  /// largest cost). Same fixed point, far fewer iterations for small lambda.
  /// max_iter bounds the iterations of all stages together.
  bool anneal = true;
};

struct SinkhornResult {
  TransportPlan plan;
  double cost = 0.0;  // unregularized <pi, C>
  bool converged = false;
  int iterations = 0;
  double marginal_violation = 0.0;
};

/// Entropy-regularized OT, min <pi, C> + lambda * sum pi (log pi - 1), with
/// squared Euclidean C. Runs the scaling iterations on the dual potentials in
/// log space so that small lambda does not underflow. A run that hits
/// max_iter is returned with converged = false.
SinkhornResult sinkhorn_plan(const EmpiricalMeasure& source, const EmpiricalMeasure& target,
                             const SinkhornOptions& options = {});

}  // namespace rotcic
