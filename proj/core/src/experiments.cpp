#include "rotcic/experiments.hpp"

#include "rotcic/error.hpp"
#include "rotcic/exact_ot.hpp"
#include "rotcic/robust.hpp"
#include "rotcic/seed.hpp"
#include "rotcic/svg.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <random>

namespace rotcic {
namespace {

enum class Method { kCiC, kOT, kSinkhorn, kROT };

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_meta(std::string& meta, const std::string& item) {
  if (item.empty()) return;
  if (!meta.empty()) meta += ';';
  meta += item;
}

CounterfactualEstimate estimate(Method method, const DatasetQuad& q, const ExperimentConfig& cfg,
                                double lambda, std::uint64_t direction_seed) {
  switch (method) {
    case Method::kCiC:
      return cic_tensorized(q.y0c, q.y1c, q.y0t);
    case Method::kOT:
      return ot_counterfactual(q.y0c, q.y1c, q.y0t);
    case Method::kSinkhorn:
      return sinkhorn_counterfactual(q.y0c, q.y1c, q.y0t,
                                     {lambda, cfg.sinkhorn_max_iter, cfg.sinkhorn_tol});
    case Method::kROT:
      return rot_counterfactual(q.y0c, q.y1c, q.y0t, sample_directions(cfg.k, q.dim(), direction_seed),
                                {cfg.lift});
  }
  throw InvalidInput("unknown method");
}

class Collector {
 public:
  explicit Collector(const ExperimentConfig& cfg) : cfg_(cfg) {}

  void add(BenchRecord r) {
    if (cfg_.on_record) cfg_.on_record(r);
    records_.push_back(std::move(r));
  }
  std::vector<BenchRecord> take() { return std::move(records_); }

 private:
  const ExperimentConfig& cfg_;
  std::vector<BenchRecord> records_;
};

// Runs one method on one dataset and records it. Returns the estimate so
// callers can draw it.
CounterfactualEstimate run_method(Collector& out, Method method, const std::string& experiment,
                                  const DatasetQuad& q, std::uint64_t seed, std::uint64_t cell,
                                  const ExperimentConfig& cfg, double lambda,
                                  const std::string& extra_meta) {
  CounterfactualEstimate est = estimate(method, q, cfg, lambda, derive_seed(cell, 1));
  BenchRecord r;
  r.experiment = experiment;
  r.method = est.method;
  r.n = q.y0c.size();
  r.d = q.dim();
  r.k = method == Method::kROT ? cfg.k : 0;
  if (method == Method::kSinkhorn) r.lambda = lambda;
  r.seed = seed;
  r.runtime_s = est.runtime_s;
  r.meta = est.meta_string();
  append_meta(r.meta, extra_meta);
  r.ot_distance = scored_distance(est, q.y1t_star, cfg, derive_seed(cell, 2), r.meta);
  out.add(std::move(r));
  return est;
}

std::string quad_meta(const DatasetQuad& q) {
  std::string meta = "family=" + std::string(family_name(q.family));
  if (q.family == LatentFamily::kMultivariateGamma) meta += ";pair_seed=" + std::to_string(q.pair_seed);
  return meta;
}

}  // namespace

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count) {
  if (count < 1) throw InvalidInput("need at least one seed");
  std::vector<std::uint64_t> out(static_cast<std::size_t>(count));
  std::iota(out.begin(), out.end(), first);
  return out;
}

std::uint64_t cell_seed(const std::string& experiment, std::int64_t n, std::int64_t d,
                        std::uint64_t seed) {
  const std::string id = experiment + '|' + std::to_string(n) + '|' + std::to_string(d);
  return derive_seed(seed, fnv1a(id));
}

EmpiricalMeasure subsample(const EmpiricalMeasure& m, Index count, std::uint64_t seed) {
  if (count < 1) throw InvalidInput("subsample size must be >= 1");
  if (count >= m.size()) return m;
  std::vector<Index> idx(static_cast<std::size_t>(m.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first `count` slots become a uniform sample.
  for (Index i = 0; i < count; ++i) {
    std::uniform_int_distribution<Index> pick(i, m.size() - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  idx.resize(static_cast<std::size_t>(count));
  std::sort(idx.begin(), idx.end());
  Eigen::MatrixXd pts(count, m.dim());
  for (Index i = 0; i < count; ++i) pts.row(i) = m.point(idx[static_cast<std::size_t>(i)]);
  return EmpiricalMeasure::uniform(std::move(pts));
}

double scored_distance(const CounterfactualEstimate& est, const EmpiricalMeasure& truth,
                       const ExperimentConfig& cfg, std::uint64_t seed, std::string& meta) {
  const EmpiricalMeasure full = est.measure();
  if (!cfg.metric_subsample || (*cfg.metric_subsample >= full.size() && *cfg.metric_subsample >= truth.size())) {
    return ot_distance(full, truth);
  }
  const Index m = *cfg.metric_subsample;
  append_meta(meta, "metric_subsample=" + std::to_string(m));
  return ot_distance(subsample(full, m, derive_seed(seed, 0)), subsample(truth, m, derive_seed(seed, 1)));
}

std::vector<BenchRecord> run_illustrative(LatentFamily family, Index n,
                                          const std::vector<std::uint64_t>& seeds,
                                          const ExperimentConfig& cfg) {
  if (n < 2) throw InvalidInput("run_illustrative: n must be >= 2");
  if (family == LatentFamily::kMultivariateGamma) {
    throw InvalidInput("run_illustrative: family must be two-dimensional");
  }
  const std::string experiment = "illustrative/" + std::string(family_name(family));
  const LatentSpec spec = LatentSpec::for_family(family, 2);
  const ProductionPair pair = illustrative_pair();
  Collector out(cfg);
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const std::uint64_t cell = cell_seed(experiment, n, 2, seeds[s]);
    const DatasetQuad q = generate_quad(spec, pair, n, cell);
    const std::string meta = quad_meta(q);
    const auto cic = run_method(out, Method::kCiC, experiment, q, seeds[s], cell, cfg, 0.0, meta);
    const auto ot = run_method(out, Method::kOT, experiment, q, seeds[s], cell, cfg, 0.0, meta);
    const auto rot = run_method(out, Method::kROT, experiment, q, seeds[s], cell, cfg, 0.0, meta);
    if (s == 0 && !cfg.figure_dir.empty()) {
      std::filesystem::create_directories(cfg.figure_dir);
      write_scatter_svg(cfg.figure_dir / ("illustrative_" + std::string(family_name(family)) + ".svg"),
                        {{"Ground truth", q.y1t_star.points(), "#444444"},
                         {"CiC", cic.samples, "#d62728"},
                         {"OT", ot.samples, "#2ca02c"},
                         {"ROT", rot.samples, "#1f77b4"}});
    }
  }
  return out.take();
}

std::vector<BenchRecord> run_varying_n(LatentFamily family, const std::vector<Index>& n_values,
                                       const std::vector<std::uint64_t>& seeds,
                                       const ExperimentConfig& cfg) {
  if (family == LatentFamily::kMultivariateGamma) {
    throw InvalidInput("run_varying_n: family must be two-dimensional");
  }
  const std::string experiment = "varying-n/" + std::string(family_name(family));
  const LatentSpec spec = LatentSpec::for_family(family, 2);
  const ProductionPair pair = illustrative_pair();
  Collector out(cfg);
  for (Index n : n_values) {
    for (std::uint64_t seed : seeds) {
      const std::uint64_t cell = cell_seed(experiment, n, 2, seed);
      const DatasetQuad q = generate_quad(spec, pair, n, cell);
      const std::string meta = quad_meta(q);
      for (Method m : {Method::kCiC, Method::kOT, Method::kSinkhorn, Method::kROT}) {
        run_method(out, m, experiment, q, seed, cell, cfg, cfg.lambda, meta);
      }
    }
  }
  return out.take();
}

std::vector<BenchRecord> run_varying_d(const std::vector<Index>& d_values, Index n,
                                       const std::vector<std::uint64_t>& seeds,
                                       const ExperimentConfig& cfg, bool with_sinkhorn,
                                       std::uint64_t pair_seed) {
  const std::string experiment = "varying-d";
  Collector out(cfg);
  for (Index d : d_values) {
    const ProductionPair pair = gen_comonotone_pair(d, derive_seed(pair_seed, static_cast<std::uint64_t>(d)));
    const LatentSpec spec = LatentSpec::multivariate_gamma(d);
    for (std::uint64_t seed : seeds) {
      const std::uint64_t cell = cell_seed(experiment, n, d, seed);
      const DatasetQuad q = generate_quad(spec, pair, n, cell);
      const std::string meta = quad_meta(q);
      run_method(out, Method::kCiC, experiment, q, seed, cell, cfg, 0.0, meta);
      run_method(out, Method::kOT, experiment, q, seed, cell, cfg, 0.0, meta);
      if (with_sinkhorn) run_method(out, Method::kSinkhorn, experiment, q, seed, cell, cfg, cfg.lambda, meta);
      run_method(out, Method::kROT, experiment, q, seed, cell, cfg, 0.0, meta);
    }
  }
  return out.take();
}

std::vector<BenchRecord> run_varying_k(const VaryingKConfig& vk, const ExperimentConfig& cfg) {
  if (vk.runs < 1) throw InvalidInput("run_varying_k: runs must be >= 1");
  const std::string experiment = "varying-k";
  Collector out(cfg);
  for (Index d : vk.d_values) {
    const ProductionPair pair = gen_comonotone_pair(d, derive_seed(vk.pair_seed, static_cast<std::uint64_t>(d)));
    const std::uint64_t cell = cell_seed(experiment, vk.n, d, vk.seed);
    const DatasetQuad q = generate_quad(LatentSpec::multivariate_gamma(d), pair, vk.n, cell);
    const std::string meta = quad_meta(q);

    auto record = [&](const std::string& method, int k, int run, const CounterfactualEstimate& est,
                      double runtime, double objective) {
      BenchRecord r;
      r.experiment = experiment;
      r.method = method;
      r.n = vk.n;
      r.d = d;
      r.k = k;
      r.seed = static_cast<std::uint64_t>(run);
      r.runtime_s = runtime;
      r.meta = est.meta_string();
      append_meta(r.meta, "objective=" + fmt(objective));
      append_meta(r.meta, meta);
      r.ot_distance = scored_distance(est, q.y1t_star, cfg,
                                      derive_seed(cell, fnv1a(method) ^ static_cast<std::uint64_t>(k * 7919 + run)),
                                      r.meta);
      out.add(std::move(r));
    };

    for (int k : vk.k_values) {
      for (int run = 0; run < vk.runs; ++run) {
        const DirectionSet dirs =
            sample_directions(k, d, derive_seed(cell, 1000003ULL * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(run)));
        const CounterfactualEstimate est = rot_counterfactual(q.y0c, q.y1c, q.y0t, dirs, {cfg.lift});
        const double objective = *std::max_element(est.projected_costs.begin(), est.projected_costs.end());
        record("rot", k, run, est, est.runtime_s, objective);
      }
    }
    for (int iters : vk.ascent_iters) {
      for (int run = 0; run < vk.runs; ++run) {
        AscentOptions opts;
        opts.iters = iters;
        opts.seed = derive_seed(cell, 0xa5ce17ULL + static_cast<std::uint64_t>(run));
        const auto start = std::chrono::steady_clock::now();
        const AscentResult asc = max_sliced_ascent(q.y0c, q.y1c, opts);
        const double ascent_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        CounterfactualEstimate est = rot_counterfactual(q.y0c, q.y1c, q.y0t, asc.direction, {cfg.lift});
        est.method = "ascent";
        record("ascent", iters, run, est, ascent_s + est.runtime_s, asc.cost);
      }
    }
  }
  return out.take();
}

CkReport run_ck(const CKDataset& data, int runs, std::uint64_t seed, const ExperimentConfig& cfg) {
  if (runs < 1) throw InvalidInput("run_ck: runs must be >= 1");
  const std::string experiment = "ck";
  Collector out(cfg);
  CkReport report;
  report.control_n = data.control_count();
  report.treatment_n = data.treatment_count();

  const CounterfactualEstimate ot = ot_counterfactual(data.y0c, data.y1c, data.y0t);
  const EmpiricalMeasure reference = ot.measure();
  const Index n = data.treatment_count();
  const Index d = data.y0c.dim();
  auto base = [&](const CounterfactualEstimate& est, std::uint64_t s, std::int64_t k) {
    BenchRecord r;
    r.experiment = experiment;
    r.method = est.method;
    r.n = n;
    r.d = d;
    r.k = k;
    r.seed = s;
    r.runtime_s = est.runtime_s;
    r.meta = est.meta_string();
    append_meta(r.meta, "reference=ot");
    r.ot_distance = ot_distance(est.measure(), reference);
    return r;
  };

  BenchRecord ot_row = base(ot, seed, 0);
  out.add(ot_row);
  const CounterfactualEstimate cic = cic_tensorized(data.y0c, data.y1c, data.y0t);
  BenchRecord cic_row = base(cic, seed, 0);
  report.cic_vs_ot = cic_row.ot_distance;
  out.add(std::move(cic_row));

  std::vector<double> rot_distances;
  std::optional<CounterfactualEstimate> first_rot;
  for (int run = 0; run < runs; ++run) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(run);
    const DirectionSet dirs = sample_directions(cfg.k, d, derive_seed(cell_seed(experiment, n, d, s), 1));
    CounterfactualEstimate rot = rot_counterfactual(data.y0c, data.y1c, data.y0t, dirs, {cfg.lift});
    BenchRecord r = base(rot, s, cfg.k);
    rot_distances.push_back(r.ot_distance);
    out.add(std::move(r));
    if (!first_rot) first_rot = std::move(rot);
  }
  report.rot_mean = mean_of(rot_distances);
  report.rot_std = stddev_of(rot_distances);

  if (!cfg.figure_dir.empty() && d == 2) {
    std::filesystem::create_directories(cfg.figure_dir);
    write_scatter_svg(cfg.figure_dir / "ck.svg",
                      {{"Observed NJ, wave 2", data.y1t.points(), "#444444"},
                       {"CiC", cic.samples, "#d62728"},
                       {"OT", ot.samples, "#2ca02c"},
                       {"ROT (one run)", first_rot->samples, "#1f77b4"}},
                      "FT", "PT");
  }
  report.records = out.take();
  return report;
}

CkReport run_ck(const std::filesystem::path& path, int runs, std::uint64_t seed,
                const ExperimentConfig& cfg) {
  return run_ck(load_ck(path, ck_ftpt_columns(), ck_all_columns()), runs, seed, cfg);
}

std::vector<BenchRecord> run_lambda_sweep(const LambdaSweepConfig& sweep,
                                          const std::vector<std::uint64_t>& seeds,
                                          const ExperimentConfig& cfg) {
  if (sweep.lambdas.empty()) throw InvalidInput("run_lambda_sweep: no lambda values");
  Collector out(cfg);
  auto run_cell = [&](const std::string& experiment, const DatasetQuad& q, std::uint64_t seed,
                      std::uint64_t cell) {
    const std::string meta = quad_meta(q);
    for (Method m : {Method::kCiC, Method::kOT, Method::kROT}) {
      run_method(out, m, experiment, q, seed, cell, cfg, 0.0, meta);
    }
    for (double lambda : sweep.lambdas) {
      run_method(out, Method::kSinkhorn, experiment, q, seed, cell, cfg, lambda, meta);
    }
  };

  const std::string exp_n = "lambda-sweep/varying-n/" + std::string(family_name(sweep.family));
  const LatentSpec spec2 = LatentSpec::for_family(sweep.family, 2);
  for (Index n : sweep.n_values) {
    for (std::uint64_t seed : seeds) {
      const std::uint64_t cell = cell_seed(exp_n, n, 2, seed);
      run_cell(exp_n, generate_quad(spec2, illustrative_pair(), n, cell), seed, cell);
    }
  }
  const std::string exp_d = "lambda-sweep/varying-d";
  for (Index d : sweep.d_values) {
    const ProductionPair pair = gen_comonotone_pair(d, derive_seed(sweep.pair_seed, static_cast<std::uint64_t>(d)));
    for (std::uint64_t seed : seeds) {
      const std::uint64_t cell = cell_seed(exp_d, sweep.n_for_d, d, seed);
      run_cell(exp_d, generate_quad(LatentSpec::multivariate_gamma(d), pair, sweep.n_for_d, cell), seed, cell);
    }
  }
  return out.take();
}

}  // namespace rotcic
