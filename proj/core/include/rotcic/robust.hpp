#pragma once

#include "rotcic/directions.hpp"
#include "rotcic/measure.hpp"

#include <cstdint>
#include <vector>

namespace rotcic {

/// Squared-cost OT between the projections of two measures onto `w`.
double projected_cost(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const Direction& w);

struct RotSelection {
  Direction best;
  std::size_t best_index = 0;
  double cost = 0.0;
  std::vector<double> all_costs;
};

/// Robust OT over a finite direction set: evaluates the projected 1D cost for
/// every direction and returns the maximizer (lowest index on ties).
RotSelection rot_select(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                        const DirectionSet& dirs);

/// Euclidean gradient of w -> projected_cost(mu, nu, w) with the monotone
/// matching of the projected atoms held fixed:
///   sum over coupled pairs 2 * mass * <x_i - y_j, w> (x_i - y_j).
Eigen::VectorXd projected_cost_gradient(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                        const Direction& w, double* cost = nullptr);

struct AscentOptions {
  int iters = 100;
  double step = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
};

struct AscentResult {
  Direction direction;
  double cost = 0.0;
  int iterations = 0;          // updates actually taken
  std::vector<double> trace;   // objective at each visited iterate
};

/// Max-sliced objective maximized over the unit sphere with adaptive-moment
/// (Adam) ascent started from one seeded random direction. The gradient is
/// taken in the tangent space of the sphere and the iterate is renormalized
/// after every update. Stops early on a zero gradient.
AscentResult max_sliced_ascent(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                               const AscentOptions& options = {});

}  // namespace rotcic
