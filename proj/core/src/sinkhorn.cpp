#include "rotcic/sinkhorn.hpp"

#include "rotcic/error.hpp"
#include "rotcic/exact_ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rotcic {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kStageTolerance = 1e-3;

// Row-wise log-sum-exp of (g_j - C_ij / lambda), with C row-major n x m.
void row_log_sum_exp(const std::vector<double>& costs, Index n, Index m, double inv_lambda,
                     const Eigen::VectorXd& g, Eigen::VectorXd& out) {
  Eigen::ArrayXd scratch(m);
  for (Index i = 0; i < n; ++i) {
    const Eigen::Map<const Eigen::ArrayXd> row(costs.data() + i * m, m);
    scratch = g.array() - row * inv_lambda;
    const double top = scratch.maxCoeff();
    if (top == kNegInf) {
      out[i] = kNegInf;
      continue;
    }
    out[i] = top + std::log((scratch - top).exp().sum());
  }
}

// Column-wise log-sum-exp of (f_i - C_ij / lambda).
void col_log_sum_exp(const std::vector<double>& costs, Index n, Index m, double inv_lambda,
                     const Eigen::VectorXd& f, Eigen::VectorXd& out) {
  Eigen::ArrayXd top = Eigen::ArrayXd::Constant(m, kNegInf);
  for (Index i = 0; i < n; ++i) {
    if (f[i] == kNegInf) continue;
    const Eigen::Map<const Eigen::ArrayXd> row(costs.data() + i * m, m);
    top = top.max(f[i] - row * inv_lambda);
  }
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(m);
  const Eigen::ArrayXd safe_top = (top == kNegInf).select(0.0, top);
  for (Index i = 0; i < n; ++i) {
    if (f[i] == kNegInf) continue;
    const Eigen::Map<const Eigen::ArrayXd> row(costs.data() + i * m, m);
    acc += (f[i] - row * inv_lambda - safe_top).exp();
  }
  out = (top == kNegInf).select(Eigen::ArrayXd::Constant(m, kNegInf), safe_top + acc.log());
}

double row_violation(const Eigen::VectorXd& f, const Eigen::VectorXd& row_lse,
                     const Eigen::VectorXd& a) {
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double mass = (f[i] == kNegInf || row_lse[i] == kNegInf) ? 0.0 : std::exp(f[i] + row_lse[i]);
    worst = std::max(worst, std::abs(mass - a[i]));
  }
  return worst;
}

}  // namespace

SinkhornResult sinkhorn_plan(const EmpiricalMeasure& source, const EmpiricalMeasure& target,
                             const SinkhornOptions& options) {
  if (!(options.lambda > 0.0) || !std::isfinite(options.lambda)) {
    throw InvalidInput("sinkhorn lambda must be positive and finite");
  }
  if (options.max_iter < 1) throw InvalidInput("sinkhorn max_iter must be >= 1");
  require_same_dim(source, target, "sinkhorn_plan");

  const Index n = source.size();
  const Index m = target.size();
  const std::vector<double> costs = squared_euclidean_costs(source, target);
  const Eigen::VectorXd log_a = source.weights().array().log().matrix();
  const Eigen::VectorXd log_b = target.weights().array().log().matrix();

  // Potentials are kept in cost units (F = lambda f, G = lambda g) so they can
  // be carried from one lambda to the next: pi_ij = exp((F_i + G_j - C_ij) / lambda).
  Eigen::VectorXd F = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd G = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd f(n), g(m), row_lse(n), col_lse(m);

  // Annealing schedule: halve lambda from the cost scale down to the target,
  // solving each intermediate problem loosely. Only the last stage decides
  // convergence; the fixed point is that of the target lambda.
  std::vector<double> schedule;
  if (options.anneal) {
    const double top = *std::max_element(costs.begin(), costs.end());
    for (double l = top; l > 2.0 * options.lambda; l *= 0.5) schedule.push_back(l);
  }
  schedule.push_back(options.lambda);

  bool converged = false;
  int iterations = 0;
  double inv_lambda = 1.0;
  for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
    const bool last = stage + 1 == schedule.size();
    const double lambda = schedule[stage];
    inv_lambda = 1.0 / lambda;
    const double tol = last ? options.tol : std::max(options.tol, kStageTolerance);
    g = G * inv_lambda;
    f = F * inv_lambda;
    bool done = false;
    for (int it = 0; iterations < options.max_iter; ++it) {
      row_log_sum_exp(costs, n, m, inv_lambda, g, row_lse);
      // After a column update the column marginals are exact, so the row
      // deviation of the current plan is the marginal violation.
      if (it > 0 && row_violation(f, row_lse, source.weights()) < tol) {
        done = true;
        break;
      }
      f = log_a - row_lse;
      col_log_sum_exp(costs, n, m, inv_lambda, f, col_lse);
      g = log_b - col_lse;
      ++iterations;
    }
    F = f * lambda;
    G = g * lambda;
    if (last) {
      if (!done) {
        row_log_sum_exp(costs, n, m, inv_lambda, g, row_lse);
        done = row_violation(f, row_lse, source.weights()) < tol;
      }
      converged = done;
    }
  }

  SinkhornResult result{TransportPlan(SparsePlan(n, m), source.weights(), target.weights())};
  std::vector<PlanEntry> entries;
  entries.reserve(static_cast<std::size_t>(n * m));
  double cost = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (f[i] == kNegInf) continue;
    for (Index j = 0; j < m; ++j) {
      const double c = costs[static_cast<std::size_t>(i * m + j)];
      const double value = std::exp(f[i] + g[j] - c * inv_lambda);
      if (value > 0.0) {
        entries.emplace_back(i, j, value);
        cost += value * c;
      }
    }
  }
  result.plan = TransportPlan::from_entries(n, m, entries, source.weights(), target.weights());
  result.cost = cost;
  result.converged = converged;
  result.iterations = iterations;
  result.marginal_violation = result.plan.marginal_violation();
  return result;
}

}  // namespace rotcic
