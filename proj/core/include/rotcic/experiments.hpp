#pragma once

#include "rotcic/ck.hpp"
#include "rotcic/datagen.hpp"
#include "rotcic/estimators.hpp"
#include "rotcic/records.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rotcic {

struct ExperimentConfig {
  int k = 10;                               // directions for the ROT estimator
  double lambda = 30.0;                     // Sinkhorn entropy weight
  int sinkhorn_max_iter = 10000;
  double sinkhorn_tol = 1e-6;
  std::optional<Index> metric_subsample;    // evaluate on M atoms drawn without replacement
  RotLift lift = RotLift::kBarycentric;
  std::filesystem::path figure_dir;         // empty: no figures
  std::function<void(const BenchRecord&)> on_record;  // progress hook
};

/// seeds first, first + 1, ..., first + count - 1.
std::vector<std::uint64_t> seed_range(std::uint64_t first, int count);

/// Seed of one experiment cell; depends only on its arguments.
std::uint64_t cell_seed(const std::string& experiment, std::int64_t n, std::int64_t d,
                        std::uint64_t seed);

/// Evaluation distance honoring cfg.metric_subsample; appends
/// `metric_subsample=M` to `meta` when subsampling was applied.
double scored_distance(const CounterfactualEstimate& est, const EmpiricalMeasure& truth,
                       const ExperimentConfig& cfg, std::uint64_t seed, std::string& meta);

/// Uniform subsample of `m` atoms without replacement (reweighted uniformly).
EmpiricalMeasure subsample(const EmpiricalMeasure& m, Index count, std::uint64_t seed);

/// CiC, OT and ROT on the two-dimensional illustrative setting, one dataset
/// per seed. Writes illustrative_<family>.svg for the first seed when a
/// figure directory is configured.
std::vector<BenchRecord> run_illustrative(LatentFamily family, Index n,
                                          const std::vector<std::uint64_t>& seeds,
                                          const ExperimentConfig& cfg);

/// CiC, OT, Sinkhorn and ROT with d = 2 over a grid of sample sizes.
std::vector<BenchRecord> run_varying_n(LatentFamily family, const std::vector<Index>& n_values,
                                       const std::vector<std::uint64_t>& seeds,
                                       const ExperimentConfig& cfg);

/// Multivariate Gamma latents; one co-monotone pair per d (seeded by d and
/// `pair_seed`) reused across seeds. Sinkhorn is included on request.
std::vector<BenchRecord> run_varying_d(const std::vector<Index>& d_values, Index n,
                                       const std::vector<std::uint64_t>& seeds,
                                       const ExperimentConfig& cfg, bool with_sinkhorn = false,
                                       std::uint64_t pair_seed = 0);

struct VaryingKConfig {
  std::vector<Index> d_values = {2, 5, 10, 20, 50, 100};
  std::vector<int> k_values = {5, 10, 50, 100, 200, 500};
  std::vector<int> ascent_iters = {50, 100, 500};
  Index n = 5000;
  int runs = 10;
  std::uint64_t seed = 0;        // dataset seed
  std::uint64_t pair_seed = 0;
};

/// One dataset per d; ROT(k) and max-sliced ascent(iters) repeated `runs`
/// times with fresh direction seeds. The selected projected cost is kept in
/// the `objective` metadata field. Ascent rows store the iteration count in k.
std::vector<BenchRecord> run_varying_k(const VaryingKConfig& vk, const ExperimentConfig& cfg);

struct CkReport {
  std::vector<BenchRecord> records;
  Index control_n = 0;
  Index treatment_n = 0;
  double cic_vs_ot = 0.0;
  double rot_mean = 0.0;
  double rot_std = 0.0;
};

/// FT/PT analysis: the OT estimate serves as reference; reports the distance
/// of the CiC estimate to it and of `runs` ROT estimates with fresh
/// direction seeds.
CkReport run_ck(const CKDataset& data, int runs, std::uint64_t seed, const ExperimentConfig& cfg);
CkReport run_ck(const std::filesystem::path& path, int runs, std::uint64_t seed,
                const ExperimentConfig& cfg);

struct LambdaSweepConfig {
  std::vector<double> lambdas = {10.0, 30.0, 90.0};
  LatentFamily family = LatentFamily::kBivariateGamma;
  std::vector<Index> n_values = {500, 1000, 2000, 5000};
  std::vector<Index> d_values = {2, 5, 10, 20, 50, 100};
  Index n_for_d = 5000;
  std::uint64_t pair_seed = 0;
};

/// Varying-n and varying-d grids where CiC, OT and ROT run once per cell and
/// Sinkhorn once per lambda: |cells| * (3 + |lambdas|) records.
std::vector<BenchRecord> run_lambda_sweep(const LambdaSweepConfig& sweep,
                                          const std::vector<std::uint64_t>& seeds,
                                          const ExperimentConfig& cfg);

}  // namespace rotcic
