#pragma once

#include "rotcic/measure.hpp"

#include <cstdint>
#include <vector>

namespace rotcic {

/// A unit vector in R^d.
class Direction {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Rescales `v` to unit length; throws InvalidInput if ||v|| < 1e-12.
  static Direction normalized(const Eigen::VectorXd& v);

  /// The k-th standard basis vector of R^d.
  static Direction axis(Index d, Index k);

  const Eigen::VectorXd& vector() const noexcept { return v_; }
  Index dim() const noexcept { return v_.size(); }
  double operator[](Index i) const { return v_[i]; }

 private:
  explicit Direction(Eigen::VectorXd v) : v_(std::move(v)) {}
  Eigen::VectorXd v_;
};

struct DirectionSet {
  std::vector<Direction> directions;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return directions.size(); }
  Index dim() const { return directions.empty() ? 0 : directions.front().dim(); }
};

/// k i.i.d. directions uniform on S^{d-1}: normalized standard Gaussian
/// draws, redrawn when the draw is numerically zero. Deterministic per seed.
DirectionSet sample_directions(int k, Index d, std::uint64_t seed);

/// <x_i, w> for every row, accumulated coordinate by coordinate so the value
/// for a given point never depends on the other rows.
Eigen::VectorXd projections(const Eigen::MatrixXd& points, const Direction& w);

/// Pushforward of `m` by x -> <x, w>; weights are kept.
EmpiricalMeasure project(const EmpiricalMeasure& m, const Direction& w);

}  // namespace rotcic
