#include "rotcic/quantile_map.hpp"

#include "rotcic/error.hpp"

#include <algorithm>
#include <utility>

namespace rotcic {
namespace {

// Cumulative weights are compared with this slack so that equal prefix sums
// computed in different orders still match.
constexpr double kCdfSlack = 1e-12;

// Remaining mass below this is treated as exhausted when walking the
// north-west corner.
constexpr double kMassDust = 1e-14;

void require_1d(const EmpiricalMeasure& m, const char* what) {
  if (m.dim() != 1) throw InvalidInput(std::string(what) + " expects one-dimensional measures");
}

std::span<const double> weight_span(const EmpiricalMeasure& m) {
  return {m.weights().data(), static_cast<std::size_t>(m.size())};
}

// Calls visit(k_source, k_target, mass) for every cell of the north-west
// corner coupling of two sorted atom lists.
template <typename Visit>
void walk_north_west(const SortedAtoms& src, std::span<const double> src_w,
                     const SortedAtoms& tgt, std::span<const double> tgt_w, Visit&& visit) {
  const std::size_t n = src.size();
  const std::size_t m = tgt.size();
  std::size_t i = 0;
  std::size_t j = 0;
  double ra = src_w[static_cast<std::size_t>(src.order[0])];
  double rb = tgt_w[static_cast<std::size_t>(tgt.order[0])];
  while (i < n && j < m) {
    const double t = std::min(ra, rb);
    if (t > 0.0) visit(i, j, t);
    ra -= t;
    rb -= t;
    if (ra <= kMassDust) {
      if (++i < n) ra = src_w[static_cast<std::size_t>(src.order[i])];
    }
    if (rb <= kMassDust) {
      if (++j < m) rb = tgt_w[static_cast<std::size_t>(tgt.order[j])];
    }
  }
}

}  // namespace

SortedAtoms SortedAtoms::from(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw InvalidInput("cannot sort an empty atom list");
  if (values.size() != weights.size()) throw InvalidInput("values and weights differ in length");
  std::vector<std::pair<double, Index>> keyed(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) keyed[i] = {values[i], static_cast<Index>(i)};
  std::sort(keyed.begin(), keyed.end());

  SortedAtoms out;
  out.values.resize(values.size());
  out.cumulative.resize(values.size());
  out.order.resize(values.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    out.values[k] = keyed[k].first;
    out.order[k] = keyed[k].second;
    acc += weights[static_cast<std::size_t>(keyed[k].second)];
    out.cumulative[k] = acc;
  }
  return out;
}

SortedAtoms SortedAtoms::from(const EmpiricalMeasure& measure) {
  require_1d(measure, "SortedAtoms");
  return from(std::span<const double>(measure.points().data(), static_cast<std::size_t>(measure.size())),
              weight_span(measure));
}

double SortedAtoms::cdf(double s) const {
  const auto it = std::upper_bound(values.begin(), values.end(), s);
  if (it == values.begin()) return 0.0;
  return cumulative[static_cast<std::size_t>(it - values.begin()) - 1];
}

double SortedAtoms::quantile(double x) const {
  if (x <= 0.0) return values.front();
  const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), x - kCdfSlack);
  if (it == cumulative.end()) return values.back();
  return values[static_cast<std::size_t>(it - cumulative.begin())];
}

Monotone1DMap::Monotone1DMap(SortedAtoms source, SortedAtoms target)
    : source_(std::move(source)), target_(std::move(target)) {
  if (source_.size() == 0 || target_.size() == 0) {
    throw InvalidInput("quantile map needs nonempty source and target");
  }
}

Monotone1DMap quantile_map_1d(const EmpiricalMeasure& source, const EmpiricalMeasure& target) {
  require_1d(source, "quantile_map_1d");
  require_1d(target, "quantile_map_1d");
  return {SortedAtoms::from(source), SortedAtoms::from(target)};
}

double ot_cost_1d(const SortedAtoms& source, std::span<const double> source_weights,
                  const SortedAtoms& target, std::span<const double> target_weights) {
  double cost = 0.0;
  walk_north_west(source, source_weights, target, target_weights,
                  [&](std::size_t i, std::size_t j, double mass) {
                    const double gap = source.values[i] - target.values[j];
                    cost += mass * gap * gap;
                  });
  return cost;
}

double ot_cost_1d(const EmpiricalMeasure& source, const EmpiricalMeasure& target) {
  require_1d(source, "ot_cost_1d");
  require_1d(target, "ot_cost_1d");
  return ot_cost_1d(SortedAtoms::from(source), weight_span(source), SortedAtoms::from(target),
                    weight_span(target));
}

std::vector<PlanEntry> monotone_coupling_1d(const SortedAtoms& source,
                                            std::span<const double> source_weights,
                                            const SortedAtoms& target,
                                            std::span<const double> target_weights) {
  std::vector<PlanEntry> entries;
  entries.reserve(source.size() + target.size());
  walk_north_west(source, source_weights, target, target_weights,
                  [&](std::size_t i, std::size_t j, double mass) {
                    entries.emplace_back(source.order[i], target.order[j], mass);
                  });
  return entries;
}

}  // namespace rotcic
