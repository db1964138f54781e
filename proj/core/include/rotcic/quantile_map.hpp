#pragma once

#include "rotcic/measure.hpp"
#include "rotcic/transport_plan.hpp"

#include <span>
#include <vector>

namespace rotcic {

/// Scalar atoms sorted by value (ties keep their original order) together
/// with the running cumulative weight, i.e. the jump points of the
/// right-continuous empirical cdf.
struct SortedAtoms {
  std::vector<double> values;
  std::vector<double> cumulative;
  std::vector<Index> order;  // order[k] = original index of the k-th smallest atom

  static SortedAtoms from(std::span<const double> values, std::span<const double> weights);
  static SortedAtoms from(const EmpiricalMeasure& measure);

  std::size_t size() const noexcept { return values.size(); }

  /// F(s) = mass of atoms <= s.
  double cdf(double s) const;

  /// F^{-1}(x) = inf { t : F(t) >= x }, clamped to the smallest atom for x <= 0
  /// and to the largest atom for x > 1.
  double quantile(double x) const;
};

/// Nondecreasing map s -> F_target^{-1}(F_source(s)) between two 1D empirical
/// measures. Defined on the whole real line; below the source support it
/// returns the smallest target atom.
class Monotone1DMap {
 public:
  Monotone1DMap(SortedAtoms source, SortedAtoms target);

  double operator()(double s) const { return target_.quantile(source_.cdf(s)); }

  const SortedAtoms& source() const noexcept { return source_; }
  const SortedAtoms& target() const noexcept { return target_; }

 private:
  SortedAtoms source_;
  SortedAtoms target_;
};

Monotone1DMap quantile_map_1d(const EmpiricalMeasure& source, const EmpiricalMeasure& target);

/// Squared-cost OT between 1D measures by north-west-corner coupling of the
/// sorted atoms.
double ot_cost_1d(const EmpiricalMeasure& source, const EmpiricalMeasure& target);
double ot_cost_1d(const SortedAtoms& source, std::span<const double> source_weights,
                  const SortedAtoms& target, std::span<const double> target_weights);

/// The monotone (north-west-corner) coupling of two sorted atom lists, with
/// entries indexed by the atoms' original positions.
std::vector<PlanEntry> monotone_coupling_1d(const SortedAtoms& source,
                                            std::span<const double> source_weights,
                                            const SortedAtoms& target,
                                            std::span<const double> target_weights);

}  // namespace rotcic
