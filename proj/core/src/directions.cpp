#include "rotcic/directions.hpp"

#include "rotcic/error.hpp"

#include <random>

namespace rotcic {

Direction Direction::normalized(const Eigen::VectorXd& v) {
  if (v.size() < 1) throw InvalidInput("direction needs dimension >= 1");
  const double norm = v.norm();
  if (!(norm >= kNormTolerance) || !std::isfinite(norm)) {
    throw InvalidInput("cannot normalize a (numerically) zero direction");
  }
  return Direction(v / norm);
}

Direction Direction::axis(Index d, Index k) {
  if (d < 1 || k < 0 || k >= d) throw InvalidInput("axis index out of range");
  return Direction(Eigen::VectorXd::Unit(d, k));
}

DirectionSet sample_directions(int k, Index d, std::uint64_t seed) {
  if (k < 1) throw InvalidInput("need at least one direction");
  if (d < 1) throw InvalidInput("direction dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DirectionSet set;
  set.seed = seed;
  set.directions.reserve(static_cast<std::size_t>(k));
  Eigen::VectorXd draw(d);
  while (static_cast<int>(set.directions.size()) < k) {
    for (Index c = 0; c < d; ++c) draw[c] = gauss(rng);
    if (draw.norm() < Direction::kNormTolerance) continue;
    set.directions.push_back(Direction::normalized(draw));
  }
  return set;
}

Eigen::VectorXd projections(const Eigen::MatrixXd& points, const Direction& w) {
  if (points.cols() != w.dim()) {
    throw InvalidInput("projection: point dimension " + std::to_string(points.cols()) +
                       " does not match direction dimension " + std::to_string(w.dim()));
  }
  Eigen::VectorXd out = points.col(0) * w[0];
  for (Index c = 1; c < points.cols(); ++c) out += points.col(c) * w[c];
  return out;
}

EmpiricalMeasure project(const EmpiricalMeasure& m, const Direction& w) {
  Eigen::MatrixXd values = projections(m.points(), w);
  return {std::move(values), m.weights()};
}

}  // namespace rotcic
