#include "rotcic/robust.hpp"

#include "rotcic/error.hpp"
#include "rotcic/quantile_map.hpp"

#include <cmath>

namespace rotcic {
namespace {

std::span<const double> weight_span(const EmpiricalMeasure& m) {
  return {m.weights().data(), static_cast<std::size_t>(m.size())};
}

SortedAtoms sorted_projection(const EmpiricalMeasure& m, const Direction& w) {
  const Eigen::VectorXd p = projections(m.points(), w);
  return SortedAtoms::from(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())),
                           weight_span(m));
}

}  // namespace

double projected_cost(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const Direction& w) {
  require_same_dim(mu, nu, "projected_cost");
  return ot_cost_1d(sorted_projection(mu, w), weight_span(mu), sorted_projection(nu, w),
                    weight_span(nu));
}

RotSelection rot_select(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                        const DirectionSet& dirs) {
  if (dirs.directions.empty()) throw InvalidInput("rot_select: empty direction set");
  require_same_dim(mu, nu, "rot_select");
  if (dirs.dim() != mu.dim()) throw InvalidInput("rot_select: direction dimension mismatch");

  std::vector<double> costs;
  costs.reserve(dirs.size());
  std::size_t best = 0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    costs.push_back(projected_cost(mu, nu, dirs.directions[k]));
    if (costs[k] > costs[best]) best = k;
  }
  return {dirs.directions[best], best, costs[best], std::move(costs)};
}

Eigen::VectorXd projected_cost_gradient(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                        const Direction& w, double* cost) {
  require_same_dim(mu, nu, "projected_cost_gradient");
  const SortedAtoms src = sorted_projection(mu, w);
  const SortedAtoms tgt = sorted_projection(nu, w);
  const std::vector<PlanEntry> coupling =
      monotone_coupling_1d(src, weight_span(mu), tgt, weight_span(nu));

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(mu.dim());
  Eigen::VectorXd diff(mu.dim());
  double total = 0.0;
  for (const PlanEntry& e : coupling) {
    diff = mu.point(e.row()).transpose() - nu.point(e.col()).transpose();
    const double along = diff.dot(w.vector());
    grad += (2.0 * e.value() * along) * diff;
    total += e.value() * along * along;
  }
  if (cost != nullptr) *cost = total;
  return grad;
}

AscentResult max_sliced_ascent(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                               const AscentOptions& options) {
  if (options.iters < 1) throw InvalidInput("max_sliced_ascent: iters must be >= 1");
  if (!(options.step > 0.0)) throw InvalidInput("max_sliced_ascent: step must be positive");
  require_same_dim(mu, nu, "max_sliced_ascent");

  const Index d = mu.dim();
  Eigen::VectorXd omega = sample_directions(1, d, options.seed).directions.front().vector();
  Eigen::VectorXd first = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd second = Eigen::VectorXd::Zero(d);
  double decay1 = 1.0;
  double decay2 = 1.0;

  AscentResult result{Direction::normalized(omega), 0.0, 0, {}};
  result.trace.reserve(static_cast<std::size_t>(options.iters) + 1);
  for (int t = 1; t <= options.iters; ++t) {
    double cost = 0.0;
    Eigen::VectorXd grad = projected_cost_gradient(mu, nu, result.direction, &cost);
    result.trace.push_back(cost);
    // Only the component tangent to the sphere moves the direction.
    grad -= grad.dot(omega) * omega;
    if (grad.norm() <= 1e-12 * std::max(1.0, cost)) break;

    first = options.beta1 * first + (1.0 - options.beta1) * grad;
    second = options.beta2 * second + (1.0 - options.beta2) * grad.cwiseAbs2();
    decay1 *= options.beta1;
    decay2 *= options.beta2;
    const Eigen::VectorXd m_hat = first / (1.0 - decay1);
    const Eigen::VectorXd v_hat = second / (1.0 - decay2);
    omega += options.step * (m_hat.array() / (v_hat.array().sqrt() + options.epsilon)).matrix();
    omega.normalize();
    result.direction = Direction::normalized(omega);
    result.iterations = t;
  }
  result.cost = projected_cost(mu, nu, result.direction);
  result.trace.push_back(result.cost);
  return result;
}

}  // namespace rotcic
