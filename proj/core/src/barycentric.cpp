#include "rotcic/barycentric.hpp"

#include "rotcic/error.hpp"

#include <algorithm>

namespace rotcic {

Eigen::MatrixXd barycentric_map(const TransportPlan& plan, const EmpiricalMeasure& target) {
  if (plan.cols() != target.size()) {
    throw InvalidInput("plan column count does not match the target atom count");
  }
  const SparsePlan& pi = plan.coupling();
  Eigen::MatrixXd images = Eigen::MatrixXd::Zero(plan.rows(), target.dim());
  for (Index i = 0; i < pi.outerSize(); ++i) {
    double mass = 0.0;
    for (SparsePlan::InnerIterator it(pi, i); it; ++it) mass += it.value();
    if (!(mass > 0.0)) {
      throw InvalidInput("barycentric map: row " + std::to_string(i) + " carries no mass");
    }
    for (SparsePlan::InnerIterator it(pi, i); it; ++it) {
      images.row(i) += (it.value() / mass) * target.point(it.col());
    }
  }
  return images;
}

std::vector<Index> nearest_atoms(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& atoms) {
  if (queries.cols() != atoms.cols()) throw InvalidInput("nearest_atoms: dimension mismatch");
  if (atoms.rows() == 0) throw InvalidInput("nearest_atoms: no atoms");
  // ||q - a||^2 = ||q||^2 - 2 <q, a> + ||a||^2; the first term is constant per
  // query, so the argmin only needs the last two. Done in blocks of queries
  // to bound the scratch matrix.
  constexpr Index kBlock = 256;
  const Eigen::VectorXd atom_norms = atoms.rowwise().squaredNorm();
  std::vector<Index> nearest(static_cast<std::size_t>(queries.rows()));
  Eigen::MatrixXd scores;
  for (Index start = 0; start < queries.rows(); start += kBlock) {
    const Index len = std::min(kBlock, queries.rows() - start);
    scores.noalias() = atoms * queries.middleRows(start, len).transpose();
    for (Index q = 0; q < len; ++q) {
      Index best = 0;
      double best_score = atom_norms[0] - 2.0 * scores(0, q);
      for (Index a = 1; a < atoms.rows(); ++a) {
        const double score = atom_norms[a] - 2.0 * scores(a, q);
        if (score < best_score) {
          best_score = score;
          best = a;
        }
      }
      nearest[static_cast<std::size_t>(start + q)] = best;
    }
  }
  return nearest;
}

}  // namespace rotcic
