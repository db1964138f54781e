#pragma once

#include "rotcic/directions.hpp"
#include "rotcic/measure.hpp"
#include "rotcic/sinkhorn.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rotcic {

/// Estimated counterfactual samples, one row per pre-intervention treatment
/// atom, plus what the method decided along the way.
struct CounterfactualEstimate {
  Eigen::MatrixXd samples;
  std::string method;
  double runtime_s = 0.0;  // wall clock of the estimator call only

  // Method specific; unset fields do not apply to the method.
  std::optional<Direction> direction;
  std::vector<double> projected_costs;
  std::optional<double> lambda;
  std::optional<bool> converged;
  std::optional<double> marginal_violation;

  /// Uniform-weight measure over the samples.
  EmpiricalMeasure measure() const { return EmpiricalMeasure::uniform(samples); }
  /// Compact `key=value;...` description of the metadata.
  std::string meta_string() const;
};

/// Coordinate-wise univariate CiC: coordinate c of each treatment atom goes
/// through the quantile map from the c-th marginal of y0c to that of y1c.
CounterfactualEstimate cic_tensorized(const EmpiricalMeasure& y0c, const EmpiricalMeasure& y1c,
                                      const EmpiricalMeasure& y0t);

/// Moves every treatment atom by the displacement T(x) - x of its nearest
/// control atom x, where T are the control images. A treatment atom that
/// coincides with its anchor is sent to the anchor's image itself.
Eigen::MatrixXd transfer_displacements(const Eigen::MatrixXd& control, const Eigen::MatrixXd& images,
                                       const Eigen::MatrixXd& treatment);

/// Exact OT plan between the control measures, barycentric images of the
/// control atoms, nearest-control-atom displacement for treatment atoms.
CounterfactualEstimate ot_counterfactual(const EmpiricalMeasure& y0c, const EmpiricalMeasure& y1c,
                                         const EmpiricalMeasure& y0t);

/// As ot_counterfactual with the entropic plan.
CounterfactualEstimate sinkhorn_counterfactual(const EmpiricalMeasure& y0c,
                                               const EmpiricalMeasure& y1c,
                                               const EmpiricalMeasure& y0t,
                                               const SinkhornOptions& options = {});

/// How the 1D map found on the selected direction is turned into a map on R^d.
enum class RotLift {
  /// The monotone coupling of the projected control atoms is used as a plan
  /// between the original atoms; control atoms go to their barycentric
  /// images and treatment atoms take the displacement of their nearest
  /// control atom, exactly as in ot_counterfactual.
  kBarycentric,
  /// y -> y + (m(<y,w>) - <y,w>) w with m the 1D quantile map: only the
  /// component along the selected direction moves.
  kAlongDirection,
};

struct RotOptions {
  RotLift lift = RotLift::kBarycentric;
};

/// Robust-subspace estimator: selects the direction maximizing the projected
/// control drift and transports along it.
CounterfactualEstimate rot_counterfactual(const EmpiricalMeasure& y0c, const EmpiricalMeasure& y1c,
                                          const EmpiricalMeasure& y0t, const DirectionSet& dirs,
                                          const RotOptions& options = {});

/// ROT estimator with the direction given directly (e.g. from max_sliced_ascent).
CounterfactualEstimate rot_counterfactual(const EmpiricalMeasure& y0c, const EmpiricalMeasure& y1c,
                                          const EmpiricalMeasure& y0t, const Direction& direction,
                                          const RotOptions& options = {});

/// OT distance from the (uniformly weighted) estimate to the ground truth.
double evaluate(const CounterfactualEstimate& estimate, const EmpiricalMeasure& ground_truth);

}  // namespace rotcic
