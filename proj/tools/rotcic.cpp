// rotcic: data generation and benchmark driver.

#include "rotcic/ck.hpp"
#include "rotcic/datagen.hpp"
#include "rotcic/error.hpp"
#include "rotcic/experiments.hpp"
#include "rotcic/records.hpp"
#include "rotcic/seed.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace rotcic;

namespace {

struct Common {
  std::uint64_t seed = 0;
  fs::path out = "out";
  int k = 10;
  double lambda = 30.0;
  Index metric_subsample = 0;
  int sinkhorn_max_iter = 10000;
  double sinkhorn_tol = 1e-6;
  std::string lift = "barycentric";
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "master seed")->capture_default_str();
  app->add_option("--out", c.out, "output directory")->capture_default_str();
  app->add_option("--k", c.k, "number of ROT directions")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--lambda", c.lambda, "Sinkhorn entropy weight")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--metric-subsample", c.metric_subsample,
                  "evaluate distances on M atoms drawn without replacement (0: exact)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--sinkhorn-max-iter", c.sinkhorn_max_iter)->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--sinkhorn-tol", c.sinkhorn_tol)->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--lift", c.lift, "ROT lift: barycentric or along")
      ->capture_default_str()
      ->check(CLI::IsMember({"barycentric", "along"}));
  app->add_flag("--quiet", c.quiet, "no per-record progress on stderr");
}

ExperimentConfig make_config(const Common& c, bool figures) {
  ExperimentConfig cfg;
  cfg.k = c.k;
  cfg.lambda = c.lambda;
  cfg.sinkhorn_max_iter = c.sinkhorn_max_iter;
  cfg.sinkhorn_tol = c.sinkhorn_tol;
  if (c.metric_subsample > 0) cfg.metric_subsample = c.metric_subsample;
  cfg.lift = c.lift == "along" ? RotLift::kAlongDirection : RotLift::kBarycentric;
  if (figures) cfg.figure_dir = c.out;
  if (!c.quiet) {
    cfg.on_record = [](const BenchRecord& r) {
      std::fprintf(stderr, "%s %s n=%lld d=%lld k=%lld seed=%llu runtime=%.4gs distance=%.6g\n", r.experiment.c_str(),
                   r.method.c_str(), static_cast<long long>(r.n), static_cast<long long>(r.d),
                   static_cast<long long>(r.k), static_cast<unsigned long long>(r.seed), r.runtime_s, r.ot_distance);
    };
  }
  return cfg;
}

void emit(const Common& c, const std::vector<BenchRecord>& records) {
  write_records(c.out / "records.csv", records);
  write_summary(c.out / "summary.csv", summarize(records));
  std::cout << "wrote " << records.size() << " records to " << (c.out / "records.csv").string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate changes-in-changes estimators and benchmarks"};
  app.require_subcommand(1);

  // gen
  Common gen_c;
  std::string gen_family = "bivariate-gamma";
  Index gen_n = 1000, gen_d = 2;
  std::uint64_t gen_pair_seed = 0;
  bool gen_coupled = false;
  auto* gen = app.add_subcommand("gen", "generate one synthetic dataset (four measures) as CSV");
  add_common(gen, gen_c);
  gen->add_option("--family", gen_family, "bivariate-gamma, gaussian-mixture-2d or multivariate-gamma")->capture_default_str();
  gen->add_option("--n", gen_n, "samples per group")->capture_default_str()->check(CLI::Range(Index{2}, Index{1} << 40));
  gen->add_option("--d", gen_d, "dimension (multivariate-gamma only)")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--pair-seed", gen_pair_seed, "seed of the production pair (multivariate-gamma)")->capture_default_str();
  gen->add_flag("--coupled", gen_coupled, "reuse latent draws across the two periods within each group");

  // illustrative
  Common ill_c;
  std::vector<std::string> ill_families{"bivariate-gamma", "gaussian-mixture-2d"};
  Index ill_n = 5000;
  int ill_seeds = 10;
  auto* ill = app.add_subcommand("illustrative", "CiC, OT and ROT in the 2D illustrative setting");
  add_common(ill, ill_c);
  ill->add_option("--family", ill_families, "latent families")->capture_default_str();
  ill->add_option("--n", ill_n)->capture_default_str()->check(CLI::Range(Index{2}, Index{1} << 40));
  ill->add_option("--seeds", ill_seeds, "number of datasets")->capture_default_str()->check(CLI::PositiveNumber);

  // bench-n
  Common bn_c;
  std::vector<std::string> bn_families{"bivariate-gamma", "gaussian-mixture-2d"};
  std::vector<Index> bn_n{500, 1000, 2000, 5000};
  int bn_seeds = 10;
  auto* bn = app.add_subcommand("bench-n", "CiC, OT, Sinkhorn and ROT over sample sizes (d = 2)");
  add_common(bn, bn_c);
  bn->add_option("--family", bn_families)->capture_default_str();
  bn->add_option("--n", bn_n, "sample sizes")->capture_default_str();
  bn->add_option("--seeds", bn_seeds)->capture_default_str()->check(CLI::PositiveNumber);

  // bench-d
  Common bd_c;
  std::vector<Index> bd_d{2, 5, 10, 20, 50, 100};
  Index bd_n = 5000;
  int bd_seeds = 10;
  std::uint64_t bd_pair_seed = 0;
  bool bd_sinkhorn = false;
  auto* bd = app.add_subcommand("bench-d", "CiC, OT and ROT over dimensions (multivariate Gamma)");
  add_common(bd, bd_c);
  bd->add_option("--d", bd_d, "dimensions")->capture_default_str();
  bd->add_option("--n", bd_n)->capture_default_str()->check(CLI::Range(Index{2}, Index{1} << 40));
  bd->add_option("--seeds", bd_seeds)->capture_default_str()->check(CLI::PositiveNumber);
  bd->add_option("--pair-seed", bd_pair_seed)->capture_default_str();
  bd->add_flag("--sinkhorn", bd_sinkhorn, "include Sinkhorn");

  // bench-k
  Common bk_c;
  VaryingKConfig vk;
  auto* bk = app.add_subcommand("bench-k", "ROT over direction counts against max-sliced ascent");
  add_common(bk, bk_c);
  bk->add_option("--d", vk.d_values)->capture_default_str();
  bk->add_option("--ks", vk.k_values, "direction counts")->capture_default_str();
  bk->add_option("--iters", vk.ascent_iters, "ascent iteration counts")->capture_default_str();
  bk->add_option("--n", vk.n)->capture_default_str()->check(CLI::Range(Index{2}, Index{1} << 40));
  bk->add_option("--runs", vk.runs, "repetitions per setting")->capture_default_str()->check(CLI::PositiveNumber);
  bk->add_option("--pair-seed", vk.pair_seed)->capture_default_str();

  // lambda-sweep
  Common ls_c;
  LambdaSweepConfig sweep;
  std::string ls_family = "bivariate-gamma";
  int ls_seeds = 10;
  auto* ls = app.add_subcommand("lambda-sweep", "varying-n and varying-d grids with several Sinkhorn lambdas");
  add_common(ls, ls_c);
  ls->add_option("--lambdas", sweep.lambdas)->capture_default_str();
  ls->add_option("--family", ls_family, "latent family of the varying-n grid")->capture_default_str();
  ls->add_option("--n", sweep.n_values)->capture_default_str();
  ls->add_option("--d", sweep.d_values)->capture_default_str();
  ls->add_option("--n-for-d", sweep.n_for_d)->capture_default_str();
  ls->add_option("--seeds", ls_seeds)->capture_default_str()->check(CLI::PositiveNumber);
  ls->add_option("--pair-seed", sweep.pair_seed)->capture_default_str();

  // ck
  Common ck_c;
  fs::path ck_path;
  int ck_runs = 1000;
  auto* ck = app.add_subcommand("ck", "FT/PT analysis of the minimum-wage data");
  add_common(ck, ck_c);
  ck->add_option("--ck", ck_path, "normalized CK CSV")->required();
  ck->add_option("--runs", ck_runs, "ROT repetitions")->capture_default_str()->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      fs::create_directories(gen_c.out);
      const LatentFamily family = parse_family(gen_family);
      const bool multi = family == LatentFamily::kMultivariateGamma;
      if (!multi && gen_d != 2) throw InvalidInput("--d applies to multivariate-gamma only");
      const ProductionPair pair = multi ? gen_comonotone_pair(gen_d, derive_seed(gen_pair_seed, static_cast<std::uint64_t>(gen_d)))
                                        : illustrative_pair();
      const DatasetQuad quad =
          generate_quad(LatentSpec::for_family(family, gen_d), pair, gen_n, gen_c.seed, {gen_coupled});
      write_quad(gen_c.out, quad);
      std::cout << "wrote dataset to " << gen_c.out.string() << '\n';
    } else if (*ill) {
      fs::create_directories(ill_c.out);
      const ExperimentConfig cfg = make_config(ill_c, true);
      std::vector<BenchRecord> all;
      for (const std::string& f : ill_families) {
        auto r = run_illustrative(parse_family(f), ill_n, seed_range(ill_c.seed, ill_seeds), cfg);
        all.insert(all.end(), r.begin(), r.end());
      }
      emit(ill_c, all);
    } else if (*bn) {
      fs::create_directories(bn_c.out);
      const ExperimentConfig cfg = make_config(bn_c, false);
      std::vector<BenchRecord> all;
      for (const std::string& f : bn_families) {
        auto r = run_varying_n(parse_family(f), bn_n, seed_range(bn_c.seed, bn_seeds), cfg);
        all.insert(all.end(), r.begin(), r.end());
      }
      emit(bn_c, all);
    } else if (*bd) {
      fs::create_directories(bd_c.out);
      emit(bd_c, run_varying_d(bd_d, bd_n, seed_range(bd_c.seed, bd_seeds), make_config(bd_c, false), bd_sinkhorn,
                               bd_pair_seed));
    } else if (*bk) {
      fs::create_directories(bk_c.out);
      vk.seed = bk_c.seed;
      emit(bk_c, run_varying_k(vk, make_config(bk_c, false)));
    } else if (*ls) {
      fs::create_directories(ls_c.out);
      sweep.family = parse_family(ls_family);
      emit(ls_c, run_lambda_sweep(sweep, seed_range(ls_c.seed, ls_seeds), make_config(ls_c, false)));
    } else if (*ck) {
      fs::create_directories(ck_c.out);
      const CkReport rep = run_ck(ck_path, ck_runs, ck_c.seed, make_config(ck_c, true));
      emit(ck_c, rep.records);
      std::printf("control %lld, treatment %lld\nCiC vs OT: %.4f\nROT vs OT: %.4f +- %.4f (2 sd, %d runs)\n",
                  static_cast<long long>(rep.control_n), static_cast<long long>(rep.treatment_n), rep.cic_vs_ot,
                  rep.rot_mean, 2.0 * rep.rot_std, ck_runs);
    }
  } catch (const std::exception& e) {
    std::cerr << "rotcic: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
