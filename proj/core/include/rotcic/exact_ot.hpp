#pragma once

#include "rotcic/measure.hpp"
#include "rotcic/transport_plan.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rotcic {

/// Entering-arc selection for the transportation simplex.
enum class PivotRule {
  kBlockSearch,    // best reduced cost within a rotating block of ~sqrt(arcs) candidates
  kFirstEligible,  // Bland: lowest-index arc with negative reduced cost
};

struct ExactOtOptions {
  PivotRule pivot = PivotRule::kBlockSearch;
};

struct ExactOtResult {
  TransportPlan plan;
  double cost = 0.0;
  std::int64_t pivots = 0;
};

/// Row-major n x m matrix of squared Euclidean distances ||x_i - y_j||^2.
std::vector<double> squared_euclidean_costs(const EmpiricalMeasure& source,
                                            const EmpiricalMeasure& target);

/// Solves the balanced transportation problem
///   min <pi, C>  s.t.  pi 1 = supply, pi^T 1 = demand, pi >= 0
/// with a primal network simplex on the complete bipartite graph. The tree is
/// kept strongly feasible, so degenerate pivots cannot cycle under either pivot
/// rule. Output is deterministic for a fixed input ordering.
ExactOtResult solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::vector<double> costs, const ExactOtOptions& options = {});

/// Optimal plan and cost for the squared Euclidean ground cost.
ExactOtResult exact_ot_plan(const EmpiricalMeasure& source, const EmpiricalMeasure& target,
                            const ExactOtOptions& options = {});

/// The OT objective value (not its square root). Used as the evaluation metric.
double ot_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

}  // namespace rotcic
