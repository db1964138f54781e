// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: rotcic_acceptance [--criteria 1,2,...]
//
// The CK criterion reads the normalized CSV from $ROTCIC_CK_CSV (default
// data/njmin.csv relative to the working directory).

#include "rotcic/ck.hpp"
#include "rotcic/estimators.hpp"
#include "rotcic/exact_ot.hpp"
#include "rotcic/experiments.hpp"
#include "rotcic/quantile_map.hpp"
#include "rotcic/robust.hpp"
#include "rotcic/seed.hpp"
#include "rotcic/sinkhorn.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rotcic;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(bool ok, const std::string& id, const std::string& what, const std::string& detail) {
  std::printf("[%s] %s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void info(const std::string& id, const std::string& detail) {
  std::printf("[INFO] %s %s\n", id.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Gaussian points with standard deviation `scale`, redrawn until every pair is
// at squared distance >= min_sq.
Eigen::MatrixXd separated_points(Index n, Index d, double scale, double min_sq, std::mt19937_64& rng) {
  Eigen::MatrixXd p(n, d);
  for (Index i = 0; i < n; ++i) {
    while (true) {
      p.row(i) = oracle::gaussian_points(1, d, rng, scale);
      bool ok = true;
      for (Index j = 0; j < i && ok; ++j) ok = (p.row(i) - p.row(j)).squaredNorm() >= min_sq;
      if (ok) break;
    }
  }
  return p;
}

void criterion1() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> size(1, 7), dim(1, 3);
  double worst = 0.0;
  const auto start = Clock::now();
  for (int t = 0; t < 200; ++t) {
    const Index n = size(rng);
    const Index d = dim(rng);
    const Eigen::MatrixXd x = oracle::gaussian_points(n, d, rng);
    const Eigen::MatrixXd y = oracle::gaussian_points(n, d, rng);
    const double exact = exact_ot_plan(EmpiricalMeasure::uniform(x), EmpiricalMeasure::uniform(y)).cost;
    worst = std::max(worst, std::abs(exact - oracle::brute_force_matching_cost(x, y)));
  }
  const double elapsed = seconds(start);
  report(worst <= 1e-9 && elapsed < 5.0, "C1", "exact OT equals brute-force permutation minimum (200 instances, n<=7, d<=3)",
         fmt("max |exact - brute| = %.3g (tol 1e-9)", worst) + fmt(", total %.3f s (budget 5 s)", elapsed));
}

void criterion2() {
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<int> size(1, 50);
  double worst = 0.0;
  int unequal = 0;
  for (int t = 0; t < 200; ++t) {
    const Index n = size(rng);
    const Index m = size(rng);
    unequal += n != m;
    const EmpiricalMeasure a(oracle::gaussian_points(n, 1, rng), oracle::rational_weights(n, rng));
    const EmpiricalMeasure b(oracle::gaussian_points(m, 1, rng, 2.0), oracle::rational_weights(m, rng));
    worst = std::max(worst, std::abs(ot_cost_1d(a, b) - exact_ot_plan(a, b).cost));
  }
  report(worst <= 1e-9, "C2", "1D closed form equals exact OT (200 instances, n,m<=50, rational weights)",
         fmt("max |1d - exact| = %.3g (tol 1e-9)", worst) + ", unequal sizes in " + std::to_string(unequal) + " instances");
}

void criterion3() {
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<int> size(2, 40), dim(1, 10);
  double worst_excess = -INFINITY;
  bool rot_ok = true;
  for (int t = 0; t < 50; ++t) {
    const Index d = dim(rng);
    const Index n = size(rng);
    const Index m = size(rng);
    const EmpiricalMeasure mu(oracle::gaussian_points(n, d, rng), oracle::rational_weights(n, rng));
    const EmpiricalMeasure nu(oracle::gaussian_points(m, d, rng, 1.5), oracle::rational_weights(m, rng));
    const double exact = ot_distance(mu, nu);
    const RotSelection sel = rot_select(mu, nu, sample_directions(20, d, static_cast<std::uint64_t>(t)));
    for (double c : sel.all_costs) worst_excess = std::max(worst_excess, c - exact);
    rot_ok = rot_ok && sel.cost <= exact + 1e-8;
  }
  report(worst_excess <= 1e-8 && rot_ok, "C3", "projected costs never exceed exact OT (50 instances, d<=10, 20 directions)",
         fmt("max (projected - exact) = %.3g (tol 1e-8)", worst_excess));
}

void criterion4() {
  std::mt19937_64 rng(1004);
  double cic_id = 0, rot_id = 0, rot_along_id = 0, ot_id = 0, sk_id = 0;
  double cic_tr = 0, ot_tr = 0, rot_along_tr = 0, rot_default_tr = 0;
  for (int t = 0; t < 20; ++t) {
    const Index d = 1 + t % 5;
    const Index n = 5 + 3 * t;
    // Atoms at squared distance >= 1 from each other, so that the entropic
    // plan at lambda = 0.01 leaks at most exp(-100) of mass between atoms.
    const Eigen::MatrixXd x0 = separated_points(n, d, 10.0, 1.0, rng);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    Eigen::MatrixXd t0(n / 2 + 1, d);
    for (Index i = 0; i < t0.rows(); ++i) t0.row(i) = x0.row(pick(rng));  // on the control support
    const EmpiricalMeasure y0c = EmpiricalMeasure::uniform(x0);
    const EmpiricalMeasure y0t = EmpiricalMeasure::uniform(t0);
    const DirectionSet dirs = sample_directions(10, d, static_cast<std::uint64_t>(t));

    cic_id = std::max(cic_id, max_abs(cic_tensorized(y0c, y0c, y0t).samples - t0));
    rot_id = std::max(rot_id, max_abs(rot_counterfactual(y0c, y0c, y0t, dirs).samples - t0));
    rot_along_id = std::max(rot_along_id, max_abs(rot_counterfactual(y0c, y0c, y0t, dirs, {RotLift::kAlongDirection}).samples - t0));
    ot_id = std::max(ot_id, max_abs(ot_counterfactual(y0c, y0c, y0t).samples - t0));
    sk_id = std::max(sk_id, max_abs(sinkhorn_counterfactual(y0c, y0c, y0t, {0.01}).samples - t0));

    const Eigen::RowVectorXd v = oracle::gaussian_points(1, d, rng, 3.0);
    const EmpiricalMeasure y1c = EmpiricalMeasure::uniform(x0.rowwise() + v);
    const Eigen::MatrixXd shifted = t0.rowwise() + v;
    cic_tr = std::max(cic_tr, max_abs(cic_tensorized(y0c, y1c, y0t).samples - shifted));
    ot_tr = std::max(ot_tr, max_abs(ot_counterfactual(y0c, y1c, y0t).samples - shifted));
    const CounterfactualEstimate along = rot_counterfactual(y0c, y1c, y0t, dirs, {RotLift::kAlongDirection});
    const Eigen::RowVectorXd w = along.direction->vector().transpose();
    rot_along_tr = std::max(rot_along_tr, max_abs(along.samples - (t0.rowwise() + v.dot(w) * w)));
    rot_default_tr = std::max(rot_default_tr, max_abs(rot_counterfactual(y0c, y1c, y0t, dirs).samples - shifted));
  }
  report(cic_id == 0.0 && rot_id == 0.0 && rot_along_id == 0.0 && ot_id <= 1e-8 && sk_id <= 1e-8, "C4a",
         "identity drift returns y0t (CiC, ROT exact; OT, Sinkhorn lambda=0.01 within 1e-8)",
         fmt("max dev CiC %.3g", cic_id) + fmt(", ROT %.3g", rot_id) + fmt(", ROT(along) %.3g", rot_along_id) +
             fmt(", OT %.3g", ot_id) + fmt(", Sinkhorn %.3g", sk_id));
  report(cic_tr <= 1e-8 && ot_tr <= 1e-8 && rot_along_tr <= 1e-8, "C4b",
         "translation drift: CiC, OT give y0t+v; ROT along-direction lift gives y0t+<v,w>w (tol 1e-8)",
         fmt("max dev CiC %.3g", cic_tr) + fmt(", OT %.3g", ot_tr) + fmt(", ROT(along) %.3g", rot_along_tr));
  info("C4b", fmt("default (barycentric) ROT lift returns y0t+v under translation drift: max dev %.3g", rot_default_tr));

  // Off-separation illustration: unit-scale atoms, where entropic leakage is visible.
  std::mt19937_64 r2(44);
  const Eigen::MatrixXd x = oracle::gaussian_points(30, 3, r2);
  const EmpiricalMeasure m = EmpiricalMeasure::uniform(x);
  info("C4a", fmt("on unit-scale Gaussian atoms (n=30, d=3) Sinkhorn lambda=0.01 identity-drift deviation is %.3g",
                  max_abs(sinkhorn_counterfactual(m, m, m, {0.01}).samples - x)));
}

struct MethodStats {
  double distance = 0.0;
  double runtime = 0.0;
};

std::map<std::pair<std::int64_t, std::string>, MethodStats> by_d_method(const std::vector<BenchRecord>& records) {
  std::map<std::pair<std::int64_t, std::string>, MethodStats> out;
  for (const SummaryRow& s : summarize(records)) out[{s.d, s.method}] = {s.distance_mean, s.runtime_mean};
  return out;
}

void criterion5() {
  for (LatentFamily family : {LatentFamily::kBivariateGamma, LatentFamily::kGaussianMixture2d}) {
    const auto records = run_illustrative(family, 2000, seed_range(0, 10), {});
    auto stats = by_d_method(records);
    const MethodStats cic = stats[{2, "cic"}], ot = stats[{2, "ot"}], rot = stats[{2, "rot"}];
    const std::string name(family_name(family));
    report(rot.distance <= 0.5 * cic.distance, "C5", "illustrative " + name + ": mean distance ROT <= 0.5 x CiC",
           fmt("ROT %.4g", rot.distance) + fmt(", CiC %.4g", cic.distance) + fmt(", ratio %.3f", rot.distance / cic.distance) +
               fmt(" (OT %.4g)", ot.distance));
    report(rot.runtime <= 0.1 * ot.runtime, "C5", "illustrative " + name + ": mean runtime ROT <= 0.1 x OT",
           fmt("ROT %.4g s", rot.runtime) + fmt(", OT %.4g s", ot.runtime) + fmt(", ratio %.4f", rot.runtime / ot.runtime));
  }
}

void criterion6() {
  const std::vector<Index> ds{2, 10, 50, 100};
  const auto records = run_varying_d(ds, 2000, seed_range(0, 5), {});
  auto stats = by_d_method(records);
  bool all_better = true;
  std::string detail;
  for (Index d : ds) {
    const double rot = stats[{d, "rot"}].distance;
    const double cic = stats[{d, "cic"}].distance;
    all_better = all_better && rot < cic;
    detail += "d=" + std::to_string(d) + fmt(" ROT %.4g", rot) + fmt(" / CiC %.4g", cic) + fmt(" / OT %.4g; ", stats[{d, "ot"}].distance);
  }
  report(all_better, "C6", "varying d: mean distance ROT < CiC at every d", detail);
  const MethodStats rot = stats[{100, "rot"}], ot = stats[{100, "ot"}], cic = stats[{100, "cic"}];
  report(rot.distance <= 1.2 * ot.distance, "C6", "varying d: at d=100 distance ROT <= 1.2 x OT",
         fmt("ROT %.4g", rot.distance) + fmt(", OT %.4g", ot.distance) + fmt(", ratio %.3f", rot.distance / ot.distance));
  report(rot.runtime <= 1.5 * cic.runtime, "C6", "varying d: at d=100 runtime ROT <= 1.5 x CiC",
         fmt("ROT %.4g s", rot.runtime) + fmt(", CiC %.4g s", cic.runtime) + fmt(", ratio %.3f", rot.runtime / cic.runtime));
}

void criterion7() {
  const char* env = std::getenv("ROTCIC_CK_CSV");
  const std::filesystem::path path = env ? env : "data/njmin.csv";
  if (!std::filesystem::exists(path)) {
    const std::string why = "canonical CK CSV not found at '" + path.string() + "' (set ROTCIC_CK_CSV)";
    report(false, "C7", "CK counts 57 control / 220 treatment", why);
    report(false, "C7", "CK CiC-vs-OT distance within 5% of 72.26", why);
    report(false, "C7", "CK ROT-vs-OT mean (>=200 runs) below CiC-vs-OT", why);
    return;
  }
  const CKDataset nine = load_ck(path, ck_all_columns());
  report(nine.control_count() == 57 && nine.treatment_count() == 220, "C7", "CK counts 57 control / 220 treatment",
         "control " + std::to_string(nine.control_count()) + ", treatment " + std::to_string(nine.treatment_count()));
  const CkReport rep = run_ck(path, 1000, 0, {});
  report(std::abs(rep.cic_vs_ot - 72.26) <= 0.05 * 72.26, "C7", "CK CiC-vs-OT distance within 5% of 72.26",
         fmt("%.4f", rep.cic_vs_ot));
  report(rep.rot_mean < rep.cic_vs_ot, "C7", "CK ROT-vs-OT mean (1000 runs) below CiC-vs-OT",
         fmt("ROT %.4f", rep.rot_mean) + fmt(" +- %.4f (2 sd)", 2.0 * rep.rot_std) + fmt(", CiC %.4f", rep.cic_vs_ot));
}

void criterion8() {
  // Instances: control measures at t=0 and t=1 from the illustrative generator.
  std::vector<std::pair<EmpiricalMeasure, EmpiricalMeasure>> instances;
  for (Index n : {10, 50, 100, 200}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      for (LatentFamily f : {LatentFamily::kBivariateGamma, LatentFamily::kGaussianMixture2d}) {
        const DatasetQuad q = generate_quad(LatentSpec::for_family(f, 2), illustrative_pair(), n, 800 + seed);
        instances.emplace_back(q.y0c, q.y1c);
      }
    }
  }
  int converged = 0, total = 0;
  double worst_violation = 0.0, worst_deficit = -INFINITY;
  for (double lambda : {10.0, 30.0, 90.0}) {
    for (const auto& [a, b] : instances) {
      const SinkhornResult r = sinkhorn_plan(a, b, {lambda});
      ++total;
      if (!r.converged) continue;
      ++converged;
      worst_violation = std::max(worst_violation, r.marginal_violation);
      worst_deficit = std::max(worst_deficit, exact_ot_plan(a, b).cost - r.cost);
    }
  }
  report(converged > 0 && worst_violation <= 1e-6 && worst_deficit <= 1e-9, "C8",
         "Sinkhorn lambda in {10,30,90}, n<=200: converged plans meet marginals (1e-6) and cost >= exact - 1e-9",
         std::to_string(converged) + "/" + std::to_string(total) + " converged" + fmt(", max violation %.3g", worst_violation) +
             fmt(", max (exact - sinkhorn) %.3g", worst_deficit));

  double worst_gap = 0.0;
  bool all_converged = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LatentFamily f = seed % 2 ? LatentFamily::kGaussianMixture2d : LatentFamily::kBivariateGamma;
    const DatasetQuad q = generate_quad(LatentSpec::for_family(f, 2), illustrative_pair(), 10, 900 + seed);
    const SinkhornResult r = sinkhorn_plan(q.y0c, q.y1c, {0.01});
    all_converged = all_converged && r.converged;
    worst_gap = std::max(worst_gap, std::abs(r.cost - exact_ot_plan(q.y0c, q.y1c).cost));
  }
  report(worst_gap <= 1e-3 && all_converged, "C8", "Sinkhorn lambda=0.01, n=10: cost within 1e-3 of exact (20 generator instances)",
         fmt("max |sinkhorn - exact| = %.3g", worst_gap) + (all_converged ? ", all converged" : ", NOT all converged"));

  std::mt19937_64 rng(808);
  double unit_gap = 0.0;
  for (int t = 0; t < 20; ++t) {
    const EmpiricalMeasure a = EmpiricalMeasure::uniform(oracle::gaussian_points(10, 2, rng));
    const EmpiricalMeasure b = EmpiricalMeasure::uniform(oracle::gaussian_points(10, 2, rng));
    unit_gap = std::max(unit_gap, std::abs(sinkhorn_plan(a, b, {0.01}).cost - exact_ot_plan(a, b).cost));
  }
  info("C8", fmt("standard-normal 2D instances, n=10, lambda=0.01: max |sinkhorn - exact| = %.3g (entropic bias at unit scale)", unit_gap));
}

void criterion9() {
  // Nested direction sets on the d = 100 dataset.
  const Index d = 100, n = 2000;
  const ProductionPair pair = gen_comonotone_pair(d, derive_seed(0, static_cast<std::uint64_t>(d)));
  const std::uint64_t cell = cell_seed("varying-k", n, d, 0);
  const DatasetQuad q = generate_quad(LatentSpec::multivariate_gamma(d), pair, n, cell);
  const DirectionSet all = sample_directions(500, d, 99);
  const std::vector<int> ks{10, 50, 100, 200, 500};
  bool nested_ok = true;
  double previous = -INFINITY;
  std::string costs;
  for (int k : ks) {
    const DirectionSet prefix{{all.directions.begin(), all.directions.begin() + k}, all.seed};
    const double c = rot_select(q.y0c, q.y1c, prefix).cost;
    nested_ok = nested_ok && c >= previous;
    previous = c;
    costs += fmt("%.5g ", c);
  }
  report(nested_ok, "C9", "rot_select cost nondecreasing over nested direction sets k=10..500", "costs " + costs);

  VaryingKConfig vk;
  vk.d_values = {d};
  vk.k_values = ks;
  vk.ascent_iters = {500};
  vk.n = n;
  vk.runs = 5;
  const auto records = run_varying_k(vk, {});
  std::map<std::pair<std::string, std::int64_t>, std::vector<const BenchRecord*>> groups;
  for (const BenchRecord& r : records) groups[{r.method, r.k}].push_back(&r);
  auto mean_of_field = [&](const std::string& method, std::int64_t k, auto field) {
    std::vector<double> v;
    for (const BenchRecord* r : groups[{method, k}]) v.push_back(field(*r));
    return std::make_pair(mean_of(v), stddev_of(v));
  };
  auto runtime = [](const BenchRecord& r) { return r.runtime_s; };
  auto objective = [](const BenchRecord& r) { return std::stod(*meta_value(r.meta, "objective")); };
  auto distance = [](const BenchRecord& r) { return r.ot_distance; };

  // Least-squares slope of mean runtime against k.
  std::vector<double> xs, ys;
  for (int k : ks) {
    xs.push_back(k);
    ys.push_back(mean_of_field("rot", k, runtime).first);
  }
  const double mx = mean_of(xs), my = mean_of(ys);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  std::string rts;
  for (double y : ys) rts += fmt("%.4g ", y);
  report(slope > 0.0, "C9", "ROT runtime grows linearly in k (positive least-squares slope)",
         fmt("slope %.3g s per direction", slope) + ", mean runtimes " + rts);

  const auto [asc_obj, asc_obj_sd] = mean_of_field("ascent", 500, objective);
  const auto [rot_obj, rot_obj_sd] = mean_of_field("rot", 500, objective);
  const double asc_rt = mean_of_field("ascent", 500, runtime).first;
  const double rot_rt = mean_of_field("rot", 500, runtime).first;
  report(asc_obj >= 0.95 * rot_obj, "C9", "ascent (500 iters) objective within 5% of ROT(k=500) on d=100",
         fmt("ascent %.5g", asc_obj) + fmt(", ROT(500) %.5g", rot_obj) + fmt(", ratio %.4f", asc_obj / rot_obj));
  report(asc_rt > rot_rt, "C9", "ascent (500 iters) strictly slower than ROT(k=500)",
         fmt("ascent %.4g s", asc_rt) + fmt(", ROT(500) %.4g s", rot_rt));
  const auto [d10, s10] = mean_of_field("rot", 10, distance);
  const auto [d200, s200] = mean_of_field("rot", 200, distance);
  const auto [da, sa] = mean_of_field("ascent", 500, distance);
  info("C9", fmt("distance to ground truth: ROT(10) %.5g", d10) + fmt(" sd %.3g", s10) + fmt(", ROT(200) %.5g", d200) +
                 fmt(" sd %.3g", s200) + fmt(", ascent(500) %.5g", da) + fmt(" sd %.3g", sa));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected{1, 2, 3, 4, 5, 6, 7, 8, 9};
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criteria" && i + 1 < argc) {
      selected.clear();
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) selected.insert(std::stoi(item));
    } else {
      std::fprintf(stderr, "usage: %s [--criteria 1,2,...]\n", argv[0]);
      return 2;
    }
  }
  const std::map<int, void (*)()> criteria{{1, criterion1}, {2, criterion2}, {3, criterion3},
                                           {4, criterion4}, {5, criterion5}, {6, criterion6},
                                           {7, criterion7}, {8, criterion8}, {9, criterion9}};
  for (int c : selected) {
    const auto it = criteria.find(c);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", c);
      return 2;
    }
    try {
      it->second();
    } catch (const std::exception& e) {
      report(false, "C" + std::to_string(c), "criterion raised", e.what());
    }
  }
  std::printf("%s: %d failing check(s)\n", g_failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED", g_failures);
  return g_failures ? 1 : 0;
}
