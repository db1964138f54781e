#include "rotcic/exact_ot.hpp"

#include "rotcic/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rotcic {
namespace {

using Arc = std::int64_t;

// Primal network simplex for the uncapacitated transportation problem.
//
// Nodes 0..n-1 are sources, n..n+m-1 targets, n+m the artificial root. Arc
// e < n*m joins source e/m to target n + e%m. Arc n*m + u is the artificial
// arc of node u (u -> root for sources, root -> u for targets), which form the
// initial strongly feasible tree.
//
// Only tree arcs can carry flow, so flow is stored per node for the arc
// linking it to its parent. Potentials follow the convention that a tree arc
// (a, b) satisfies cost + pi[a] - pi[b] = 0.
class NetworkSimplex {
 public:
  NetworkSimplex(std::span<const double> supply, std::span<const double> demand,
                 std::vector<double> costs, PivotRule rule)
      : n_(static_cast<int>(supply.size())),
        m_(static_cast<int>(demand.size())),
        nodes_(n_ + m_),
        root_(n_ + m_),
        real_arcs_(static_cast<Arc>(n_) * m_),
        rule_(rule),
        cost_(std::move(costs)) {
    double max_cost = 0.0;
    for (double c : cost_) max_cost = std::max(max_cost, std::abs(c));
    art_cost_ = (max_cost + 1.0) * static_cast<double>(nodes_ + 1);
    threshold_ = 1e-14 * art_cost_;
    block_size_ = std::max<Arc>(10, static_cast<Arc>(std::sqrt(static_cast<double>(real_arcs_))));

    const std::size_t total = static_cast<std::size_t>(nodes_) + 1;
    parent_.assign(total, -1);
    first_child_.assign(total, -1);
    next_sib_.assign(total, -1);
    prev_sib_.assign(total, -1);
    depth_.assign(total, 0);
    pred_.assign(total, -1);
    up_.assign(total, 0);
    pred_flow_.assign(total, 0.0);
    pi_.assign(total, 0.0);

    for (int u = nodes_ - 1; u >= 0; --u) {
      pred_[u] = real_arcs_ + u;
      depth_[u] = 1;
      if (u < n_) {
        up_[u] = 1;
        pred_flow_[u] = supply[static_cast<std::size_t>(u)];
        pi_[u] = 0.0;
      } else {
        up_[u] = 0;
        pred_flow_[u] = demand[static_cast<std::size_t>(u - n_)];
        pi_[u] = art_cost_;
      }
      attach(u, root_);
    }
  }

  std::int64_t run() {
    std::int64_t pivots = 0;
    Arc in = -1;
    while (rule_ == PivotRule::kBlockSearch ? find_entering_block(in) : find_entering_first(in)) {
      pivot(in);
      ++pivots;
    }
    double residual = 0.0;
    for (int u = 0; u < nodes_; ++u) {
      if (pred_[u] >= real_arcs_) residual += pred_flow_[u];
    }
    if (residual > 1e-9) {
      throw std::runtime_error("transport solver ended with " + std::to_string(residual) +
                               " mass on artificial arcs");
    }
    return pivots;
  }

  std::vector<PlanEntry> entries() const {
    std::vector<PlanEntry> out;
    out.reserve(static_cast<std::size_t>(nodes_));
    for (int u = 0; u < nodes_; ++u) {
      const Arc e = pred_[u];
      if (e < real_arcs_ && pred_flow_[u] > 0.0) {
        out.emplace_back(static_cast<Index>(e / m_), static_cast<Index>(e % m_), pred_flow_[u]);
      }
    }
    return out;
  }

  double cost_of(const std::vector<PlanEntry>& plan) const {
    double total = 0.0;
    for (const auto& t : plan) {
      total += t.value() * cost_[static_cast<std::size_t>(t.row()) * m_ + t.col()];
    }
    return total;
  }

 private:
  int arc_source(Arc e) const {
    if (e < real_arcs_) return static_cast<int>(e / m_);
    const int u = static_cast<int>(e - real_arcs_);
    return u < n_ ? u : root_;
  }

  double arc_cost(Arc e) const {
    if (e < real_arcs_) return cost_[static_cast<std::size_t>(e)];
    return (e - real_arcs_) < n_ ? 0.0 : art_cost_;
  }

  double reduced_cost(Arc e, int i, int j) const {
    return cost_[static_cast<std::size_t>(e)] + pi_[i] - pi_[n_ + j];
  }

  bool find_entering_block(Arc& in) {
    double best = -threshold_;
    Arc best_arc = -1;
    Arc countdown = block_size_;
    Arc e = next_arc_;
    int i = static_cast<int>(e / m_);
    int j = static_cast<int>(e % m_);
    for (Arc step = 0; step < real_arcs_; ++step) {
      const double rc = reduced_cost(e, i, j);
      if (rc < best) {
        best = rc;
        best_arc = e;
      }
      ++e;
      if (++j == m_) {
        j = 0;
        if (++i == n_) {
          i = 0;
          e = 0;
        }
      }
      if (--countdown == 0) {
        if (best_arc >= 0) break;
        countdown = block_size_;
      }
    }
    if (best_arc < 0) return false;
    next_arc_ = e;
    in = best_arc;
    return true;
  }

  bool find_entering_first(Arc& in) {
    Arc e = 0;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j, ++e) {
        if (reduced_cost(e, i, j) < -threshold_) {
          in = e;
          return true;
        }
      }
    }
    return false;
  }

  int find_join(int u, int v) const {
    while (u != v) {
      if (depth_[u] > depth_[v]) {
        u = parent_[u];
      } else if (depth_[v] > depth_[u]) {
        v = parent_[v];
      } else {
        u = parent_[u];
        v = parent_[v];
      }
    }
    return u;
  }

  void pivot(Arc in) {
    const int s = static_cast<int>(in / m_);
    const int t = n_ + static_cast<int>(in % m_);
    const int join = find_join(s, t);

    // Flow is pushed around the cycle s -> t -> join -> s. Among the arcs
    // whose flow decreases, take the last one met when walking the cycle from
    // the join in its orientation; this keeps the tree strongly feasible.
    double delta = std::numeric_limits<double>::infinity();
    int u_out = -1;
    bool out_on_source_side = true;
    for (int u = s; u != join; u = parent_[u]) {
      if (up_[u] && pred_flow_[u] < delta) {
        delta = pred_flow_[u];
        u_out = u;
        out_on_source_side = true;
      }
    }
    for (int u = t; u != join; u = parent_[u]) {
      if (!up_[u] && pred_flow_[u] <= delta) {
        delta = pred_flow_[u];
        u_out = u;
        out_on_source_side = false;
      }
    }
    if (u_out < 0) throw std::logic_error("transport solver found an unbounded cycle");

    if (delta > 0.0) {
      for (int u = s; u != join; u = parent_[u]) pred_flow_[u] += up_[u] ? -delta : delta;
      for (int u = t; u != join; u = parent_[u]) pred_flow_[u] += up_[u] ? delta : -delta;
    }
    pred_flow_[u_out] = 0.0;

    const int u_in = out_on_source_side ? s : t;
    const int v_in = out_on_source_side ? t : s;
    rehang(in, u_in, v_in, u_out, delta);
  }

  // Removes the leaving arc above u_out and hangs the detached subtree from
  // v_in through the entering arc, reversing the stem u_in .. u_out.
  void rehang(Arc in, int u_in, int v_in, int u_out, double in_flow) {
    stem_.clear();
    for (int u = u_in;; u = parent_[u]) {
      stem_.push_back(u);
      if (u == u_out) break;
    }
    detach(u_out);
    for (std::size_t k = stem_.size() - 1; k >= 1; --k) {
      const int node = stem_[k];
      const int child = stem_[k - 1];
      detach(child);
      pred_[node] = pred_[child];
      up_[node] = up_[child] ? 0 : 1;
      pred_flow_[node] = pred_flow_[child];
      attach(node, child);
    }
    pred_[u_in] = in;
    up_[u_in] = arc_source(in) == u_in ? 1 : 0;
    pred_flow_[u_in] = in_flow;
    attach(u_in, v_in);
    refresh_subtree(u_in);
  }

  void refresh_subtree(int top) {
    dfs_.clear();
    dfs_.push_back(top);
    while (!dfs_.empty()) {
      const int u = dfs_.back();
      dfs_.pop_back();
      const int p = parent_[u];
      const double c = arc_cost(pred_[u]);
      depth_[u] = depth_[p] + 1;
      pi_[u] = up_[u] ? pi_[p] - c : pi_[p] + c;
      for (int ch = first_child_[u]; ch != -1; ch = next_sib_[ch]) dfs_.push_back(ch);
    }
  }

  void attach(int child, int par) {
    parent_[child] = par;
    prev_sib_[child] = -1;
    next_sib_[child] = first_child_[par];
    if (first_child_[par] != -1) prev_sib_[first_child_[par]] = child;
    first_child_[par] = child;
  }

  void detach(int child) {
    const int par = parent_[child];
    if (prev_sib_[child] != -1) {
      next_sib_[prev_sib_[child]] = next_sib_[child];
    } else {
      first_child_[par] = next_sib_[child];
    }
    if (next_sib_[child] != -1) prev_sib_[next_sib_[child]] = prev_sib_[child];
    prev_sib_[child] = -1;
    next_sib_[child] = -1;
  }

  const int n_;
  const int m_;
  const int nodes_;
  const int root_;
  const Arc real_arcs_;
  const PivotRule rule_;
  std::vector<double> cost_;
  double art_cost_ = 0.0;
  double threshold_ = 0.0;
  Arc block_size_ = 10;
  Arc next_arc_ = 0;

  std::vector<int> parent_;
  std::vector<int> first_child_;
  std::vector<int> next_sib_;
  std::vector<int> prev_sib_;
  std::vector<int> depth_;
  std::vector<Arc> pred_;
  std::vector<unsigned char> up_;
  std::vector<double> pred_flow_;
  std::vector<double> pi_;
  std::vector<int> stem_;
  std::vector<int> dfs_;
};

}  // namespace

std::vector<double> squared_euclidean_costs(const EmpiricalMeasure& source,
                                            const EmpiricalMeasure& target) {
  require_same_dim(source, target, "squared_euclidean_costs");
  const Index n = source.size();
  const Index m = target.size();
  const Index d = source.dim();
  // Transposed copies keep each point contiguous.
  const Eigen::MatrixXd xs = source.points().transpose();
  const Eigen::MatrixXd ys = target.points().transpose();
  std::vector<double> costs(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
  for (Index i = 0; i < n; ++i) {
    const double* x = xs.data() + i * d;
    double* row = costs.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(m);
    for (Index j = 0; j < m; ++j) {
      const double* y = ys.data() + j * d;
      double acc = 0.0;
      for (Index c = 0; c < d; ++c) {
        const double diff = x[c] - y[c];
        acc += diff * diff;
      }
      row[j] = acc;
    }
  }
  return costs;
}

ExactOtResult solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::vector<double> costs, const ExactOtOptions& options) {
  if (supply.empty() || demand.empty()) throw InvalidInput("transport problem has no atoms");
  if (costs.size() != supply.size() * demand.size()) {
    throw InvalidInput("cost matrix size does not match the marginals");
  }
  for (double a : supply) {
    if (!(a >= 0.0)) throw InvalidInput("supply entries must be nonnegative");
  }
  for (double b : demand) {
    if (!(b >= 0.0)) throw InvalidInput("demand entries must be nonnegative");
  }
  const double total_supply = accurate_sum(supply);
  const double total_demand = accurate_sum(demand);
  if (std::abs(total_supply - 1.0) > EmpiricalMeasure::kWeightTolerance ||
      std::abs(total_demand - 1.0) > EmpiricalMeasure::kWeightTolerance) {
    throw InvalidInput("transport marginals must each sum to 1");
  }
  for (double c : costs) {
    if (!std::isfinite(c)) throw InvalidInput("cost matrix has non-finite entries");
  }

  const auto n = static_cast<Index>(supply.size());
  const auto m = static_cast<Index>(demand.size());
  NetworkSimplex solver(supply, demand, std::move(costs), options.pivot);
  const std::int64_t pivots = solver.run();
  const std::vector<PlanEntry> entries = solver.entries();
  const double cost = solver.cost_of(entries);

  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(supply.data(), n);
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(demand.data(), m);
  return {TransportPlan::from_entries(n, m, entries, std::move(a), std::move(b)), cost, pivots};
}

ExactOtResult exact_ot_plan(const EmpiricalMeasure& source, const EmpiricalMeasure& target,
                            const ExactOtOptions& options) {
  require_same_dim(source, target, "exact_ot_plan");
  return solve_transport(
      std::span<const double>(source.weights().data(), static_cast<std::size_t>(source.size())),
      std::span<const double>(target.weights().data(), static_cast<std::size_t>(target.size())),
      squared_euclidean_costs(source, target), options);
}

double ot_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  return exact_ot_plan(a, b).cost;
}

}  // namespace rotcic
