#include "rotcic/barycentric.hpp"
#include "rotcic/error.hpp"
#include "rotcic/exact_ot.hpp"
#include "rotcic/sinkhorn.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace rotcic {
namespace {

TEST(Sinkhorn, SingleAtoms) {
  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 0, 0;
  b << 3, 1;
  const SinkhornResult r = sinkhorn_plan(EmpiricalMeasure::uniform(a), EmpiricalMeasure::uniform(b));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.plan.dense()(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(r.cost, 10.0, 1e-10);
}

TEST(Sinkhorn, LargeLambdaApproachesProductCoupling) {
  Eigen::MatrixXd a(2, 1), b(2, 1);
  a << 0, 1;
  b << 0, 3;
  const SinkhornResult r =
      sinkhorn_plan(EmpiricalMeasure::uniform(a), EmpiricalMeasure::uniform(b), {1e6, 10000, 1e-10});
  EXPECT_TRUE((r.plan.dense().array() - 0.25).abs().maxCoeff() < 1e-5);
}

TEST(Sinkhorn, SmallLambdaApproachesExact) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const EmpiricalMeasure a = EmpiricalMeasure::uniform(oracle::gaussian_points(4, 2, rng));
    const EmpiricalMeasure b = EmpiricalMeasure::uniform(oracle::gaussian_points(4, 2, rng));
    const SinkhornResult r = sinkhorn_plan(a, b, {1e-3, 100000, 1e-10});
    EXPECT_NEAR(r.cost, exact_ot_plan(a, b).cost, 1e-4);
  }
}

TEST(Sinkhorn, MarginalsAndCostBound) {
  std::mt19937_64 rng(13);
  for (double lambda : {0.1, 1.0, 10.0}) {
    const EmpiricalMeasure a(oracle::gaussian_points(30, 3, rng), oracle::rational_weights(30, rng));
    const EmpiricalMeasure b(oracle::gaussian_points(20, 3, rng), oracle::rational_weights(20, rng));
    const SinkhornResult r = sinkhorn_plan(a, b, {lambda, 10000, 1e-8});
    ASSERT_TRUE(r.converged);
    EXPECT_LE(r.marginal_violation, 1e-8);
    EXPECT_GE(r.cost, exact_ot_plan(a, b).cost - 1e-9);
    EXPECT_NEAR(r.cost, r.plan.cost(a, b), 1e-9);
  }
}

TEST(Sinkhorn, NonConvergenceIsFlagged) {
  std::mt19937_64 rng(14);
  const EmpiricalMeasure a = EmpiricalMeasure::uniform(oracle::gaussian_points(20, 2, rng));
  const EmpiricalMeasure b = EmpiricalMeasure::uniform(oracle::gaussian_points(20, 2, rng, 3.0));
  const SinkhornResult r = sinkhorn_plan(a, b, {0.01, 2, 1e-12});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
  EXPECT_GT(r.marginal_violation, 1e-12);
}

TEST(Sinkhorn, RejectsNonPositiveLambda) {
  const EmpiricalMeasure a = EmpiricalMeasure::uniform(Eigen::MatrixXd::Zero(1, 1));
  EXPECT_THROW(sinkhorn_plan(a, a, {0.0}), InvalidInput);
  EXPECT_THROW(sinkhorn_plan(a, a, {-1.0}), InvalidInput);
}

TEST(Barycentric, PermutationPlanIsExact) {
  Eigen::MatrixXd y(3, 2);
  y << 0.1, 0.2, 1.3, -4.0, 7.0, 1e-3;
  const std::vector<PlanEntry> e{{0, 2, 1.0 / 3}, {1, 0, 1.0 / 3}, {2, 1, 1.0 / 3}};
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(3, 1.0 / 3);
  const TransportPlan plan = TransportPlan::from_entries(3, 3, e, w, w);
  const Eigen::MatrixXd img = barycentric_map(plan, EmpiricalMeasure::uniform(y));
  EXPECT_EQ(img.row(0), y.row(2));
  EXPECT_EQ(img.row(1), y.row(0));
  EXPECT_EQ(img.row(2), y.row(1));
}

TEST(Barycentric, UniformAverage) {
  Eigen::MatrixXd y(2, 2);
  y << 0, 0, 2, 0;
  const std::vector<PlanEntry> e{{0, 0, 0.25}, {0, 1, 0.25}, {1, 0, 0.25}, {1, 1, 0.25}};
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(2, 0.5);
  const Eigen::MatrixXd img =
      barycentric_map(TransportPlan::from_entries(2, 2, e, w, w), EmpiricalMeasure::uniform(y));
  EXPECT_TRUE(img.row(0).isApprox(Eigen::RowVector2d(1, 0)));
  EXPECT_TRUE(img.row(1).isApprox(Eigen::RowVector2d(1, 0)));
}

TEST(Barycentric, LargeLambdaMapsToTargetMean) {
  std::mt19937_64 rng(15);
  const EmpiricalMeasure a = EmpiricalMeasure::uniform(oracle::gaussian_points(10, 2, rng));
  const EmpiricalMeasure b = EmpiricalMeasure::uniform(oracle::gaussian_points(12, 2, rng));
  const SinkhornResult r = sinkhorn_plan(a, b, {1e7, 1000, 1e-12});
  const Eigen::MatrixXd img = barycentric_map(r.plan, b);
  for (Index i = 0; i < img.rows(); ++i) {
    EXPECT_LT((img.row(i).transpose() - b.mean()).norm(), 1e-5);
  }
}

TEST(Barycentric, ZeroRowThrows) {
  const std::vector<PlanEntry> e{{0, 0, 1.0}};
  const TransportPlan plan = TransportPlan::from_entries(2, 1, e, Eigen::Vector2d(1, 0), Eigen::VectorXd::Ones(1));
  EXPECT_THROW(barycentric_map(plan, EmpiricalMeasure::uniform(Eigen::MatrixXd::Zero(1, 1))), InvalidInput);
}

TEST(NearestAtoms, TiesGoToLowestIndex) {
  Eigen::MatrixXd atoms(3, 1), q(2, 1);
  atoms << -1, 1, 1;
  q << 0, 0.9;
  const std::vector<Index> nn = nearest_atoms(q, atoms);
  EXPECT_EQ(nn[0], 0);
  EXPECT_EQ(nn[1], 1);
}

TEST(NearestAtoms, MatchesLinearScan) {
  std::mt19937_64 rng(16);
  const Eigen::MatrixXd atoms = oracle::gaussian_points(300, 5, rng);
  const Eigen::MatrixXd q = oracle::gaussian_points(600, 5, rng);
  const std::vector<Index> nn = nearest_atoms(q, atoms);
  for (Index i = 0; i < q.rows(); ++i) {
    Index best = 0;
    for (Index a = 1; a < atoms.rows(); ++a) {
      if ((q.row(i) - atoms.row(a)).squaredNorm() < (q.row(i) - atoms.row(best)).squaredNorm()) best = a;
    }
    EXPECT_NEAR((q.row(i) - atoms.row(nn[static_cast<std::size_t>(i)])).squaredNorm(),
                (q.row(i) - atoms.row(best)).squaredNorm(), 1e-12);
  }
}

}  // namespace
}  // namespace rotcic
