#include "rotcic/estimators.hpp"

#include "rotcic/barycentric.hpp"
#include "rotcic/error.hpp"
#include "rotcic/exact_ot.hpp"
#include "rotcic/quantile_map.hpp"
#include "rotcic/robust.hpp"

#include <chrono>
#include <cstdio>

namespace rotcic {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_inputs(const EmpiricalMeasure& y0c, const EmpiricalMeasure& y1c,
                  const EmpiricalMeasure& y0t, const char* what) {
  require_same_dim(y0c, y1c, what);
  require_same_dim(y0c, y0t, what);
}

std::span<const double> weight_span(const EmpiricalMeasure& m) {
  return {m.weights().data(), static_cast<std::size_t>(m.size())};
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Eigen::MatrixXd lift_barycentric(const EmpiricalMeasure& y0c, const EmpiricalMeasure& y1c,
                                 const EmpiricalMeasure& y0t, const Direction& w) {
  const Eigen::VectorXd p0 = projections(y0c.points(), w);
  const Eigen::VectorXd p1 = projections(y1c.points(), w);
  const SortedAtoms s0 = SortedAtoms::from({p0.data(), static_cast<std::size_t>(p0.size())},
                                           weight_span(y0c));
  const SortedAtoms s1 = SortedAtoms::from({p1.data(), static_cast<std::size_t>(p1.size())},
                                           weight_span(y1c));
  const TransportPlan plan = TransportPlan::from_entries(
      y0c.size(), y1c.size(), monotone_coupling_1d(s0, weight_span(y0c), s1, weight_span(y1c)),
      y0c.weights(), y1c.weights());
  return transfer_displacements(y0c.points(), barycentric_map(plan, y1c), y0t.points());
}

Eigen::MatrixXd lift_along(const EmpiricalMeasure& y0c, const EmpiricalMeasure& y1c,
                           const EmpiricalMeasure& y0t, const Direction& w) {
  const Monotone1DMap map = quantile_map_1d(project(y0c, w), project(y1c, w));
  const Eigen::VectorXd s = projections(y0t.points(), w);
  Eigen::MatrixXd out = y0t.points();
  for (Index i = 0; i < out.rows(); ++i) {
    out.row(i) += (map(s[i]) - s[i]) * w.vector().transpose();
  }
  return out;
}

}  // namespace

std::string CounterfactualEstimate::meta_string() const {
  std::string out;
  auto add = [&out](const std::string& key, const std::string& value) {
    if (!out.empty()) out += ';';
    out += key;
    out += '=';
    out += value;
  };
  if (direction) {
    std::string v;
    for (Index i = 0; i < direction->dim(); ++i) {
      if (i) v += ' ';
      v += format_double((*direction)[i]);
    }
    add("omega", v);
  }
  if (lambda) add("lambda", format_double(*lambda));
  if (converged) add("converged", *converged ? "1" : "0");
  if (marginal_violation) add("marginal_violation", format_double(*marginal_violation));
  return out;
}

CounterfactualEstimate cic_tensorized(const EmpiricalMeasure& y0c, const EmpiricalMeasure& y1c,
                                      const EmpiricalMeasure& y0t) {
  check_inputs(y0c, y1c, y0t, "cic_tensorized");
  const auto start = Clock::now();
  Eigen::MatrixXd out(y0t.size(), y0t.dim());
  for (Index c = 0; c < y0t.dim(); ++c) {
    const Eigen::VectorXd x0 = y0c.points().col(c);
    const Eigen::VectorXd x1 = y1c.points().col(c);
    const Monotone1DMap map(
        SortedAtoms::from({x0.data(), static_cast<std::size_t>(x0.size())}, weight_span(y0c)),
        SortedAtoms::from({x1.data(), static_cast<std::size_t>(x1.size())}, weight_span(y1c)));
    for (Index i = 0; i < y0t.size(); ++i) out(i, c) = map(y0t.points()(i, c));
  }
  CounterfactualEstimate est;
  est.samples = std::move(out);
  est.method = "cic";
  est.runtime_s = seconds_since(start);
  return est;
}

Eigen::MatrixXd transfer_displacements(const Eigen::MatrixXd& control, const Eigen::MatrixXd& images,
                                       const Eigen::MatrixXd& treatment) {
  if (control.rows() != images.rows() || control.cols() != images.cols()) {
    throw InvalidInput("transfer_displacements: images do not match the control atoms");
  }
  const std::vector<Index> anchor = nearest_atoms(treatment, control);
  Eigen::MatrixXd out(treatment.rows(), treatment.cols());
  for (Index i = 0; i < treatment.rows(); ++i) {
    const Index a = anchor[static_cast<std::size_t>(i)];
    if (treatment.row(i) == control.row(a)) {
      out.row(i) = images.row(a);
    } else {
      out.row(i) = treatment.row(i) + (images.row(a) - control.row(a));
    }
  }
  return out;
}

CounterfactualEstimate ot_counterfactual(const EmpiricalMeasure& y0c, const EmpiricalMeasure& y1c,
                                         const EmpiricalMeasure& y0t) {
  check_inputs(y0c, y1c, y0t, "ot_counterfactual");
  const auto start = Clock::now();
  const ExactOtResult ot = exact_ot_plan(y0c, y1c);
  CounterfactualEstimate est;
  est.samples = transfer_displacements(y0c.points(), barycentric_map(ot.plan, y1c), y0t.points());
  est.method = "ot";
  est.runtime_s = seconds_since(start);
  return est;
}

CounterfactualEstimate sinkhorn_counterfactual(const EmpiricalMeasure& y0c,
                                               const EmpiricalMeasure& y1c,
                                               const EmpiricalMeasure& y0t,
                                               const SinkhornOptions& options) {
  check_inputs(y0c, y1c, y0t, "sinkhorn_counterfactual");
  const auto start = Clock::now();
  const SinkhornResult sk = sinkhorn_plan(y0c, y1c, options);
  CounterfactualEstimate est;
  est.samples = transfer_displacements(y0c.points(), barycentric_map(sk.plan, y1c), y0t.points());
  est.method = "sinkhorn";
  est.runtime_s = seconds_since(start);
  est.lambda = options.lambda;
  est.converged = sk.converged;
  est.marginal_violation = sk.marginal_violation;
  return est;
}

CounterfactualEstimate rot_counterfactual(const EmpiricalMeasure& y0c, const EmpiricalMeasure& y1c,
                                          const EmpiricalMeasure& y0t, const DirectionSet& dirs,
                                          const RotOptions& options) {
  check_inputs(y0c, y1c, y0t, "rot_counterfactual");
  const auto start = Clock::now();
  RotSelection sel = rot_select(y0c, y1c, dirs);
  CounterfactualEstimate est;
  est.samples = options.lift == RotLift::kBarycentric ? lift_barycentric(y0c, y1c, y0t, sel.best)
                                                      : lift_along(y0c, y1c, y0t, sel.best);
  est.method = "rot";
  est.runtime_s = seconds_since(start);
  est.direction = sel.best;
  est.projected_costs = std::move(sel.all_costs);
  return est;
}

CounterfactualEstimate rot_counterfactual(const EmpiricalMeasure& y0c, const EmpiricalMeasure& y1c,
                                          const EmpiricalMeasure& y0t, const Direction& direction,
                                          const RotOptions& options) {
  check_inputs(y0c, y1c, y0t, "rot_counterfactual");
  if (direction.dim() != y0c.dim()) throw InvalidInput("rot_counterfactual: direction dimension mismatch");
  const auto start = Clock::now();
  CounterfactualEstimate est;
  est.samples = options.lift == RotLift::kBarycentric ? lift_barycentric(y0c, y1c, y0t, direction)
                                                      : lift_along(y0c, y1c, y0t, direction);
  est.method = "rot";
  est.runtime_s = seconds_since(start);
  est.direction = direction;
  return est;
}

double evaluate(const CounterfactualEstimate& estimate, const EmpiricalMeasure& ground_truth) {
  return ot_distance(estimate.measure(), ground_truth);
}

}  // namespace rotcic
