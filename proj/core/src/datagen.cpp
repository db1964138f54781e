#include "rotcic/datagen.hpp"

#include "rotcic/error.hpp"
#include "rotcic/seed.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace rotcic {
namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kPairTolerance = 1e-10;

double condition_number(const Eigen::MatrixXd& m) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double smallest = s[s.size() - 1];
  return smallest > 0.0 ? s[0] / smallest : INFINITY;
}

// Uniform on the open interval (0, 1).
double open_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = 0.0;
  while (x == 0.0) x = u(rng);
  return x;
}

void validate_marginal(const Marginal& m) {
  if (const auto* g = std::get_if<GammaMarginal>(&m)) {
    if (!(g->shape > 0.0) || !(g->scale > 0.0) || !std::isfinite(g->shape) ||
        !std::isfinite(g->scale)) {
      throw InvalidInput("gamma marginal needs positive finite shape and scale");
    }
    return;
  }
  const auto& mix = std::get<NormalMixtureMarginal>(m);
  if (mix.weights.empty() || mix.weights.size() != mix.means.size() ||
      mix.weights.size() != mix.sds.size()) {
    throw InvalidInput("mixture marginal needs matching nonempty weights, means and sds");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < mix.weights.size(); ++i) {
    if (!(mix.weights[i] >= 0.0) || !(mix.sds[i] > 0.0) || !std::isfinite(mix.means[i])) {
      throw InvalidInput("mixture marginal has an invalid component");
    }
    total += mix.weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("mixture weights must sum to 1");
}

// One draw per marginal type; the generator is owned by the caller so that a
// row is always produced by the same sequence of calls.
struct MarginalSampler {
  std::mt19937_64& rng;

  double operator()(const GammaMarginal& g) const {
    std::gamma_distribution<double> dist(g.shape, g.scale);
    return dist(rng);
  }
  double operator()(const NormalMixtureMarginal& m) const {
    std::discrete_distribution<std::size_t> pick(m.weights.begin(), m.weights.end());
    const std::size_t c = pick(rng);
    std::normal_distribution<double> dist(m.means[c], m.sds[c]);
    return dist(rng);
  }
};

NormalMixtureMarginal two_bumps(double a, double b) { return {{0.5, 0.5}, {a, b}, {1.0, 1.0}}; }

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ProductionPair::validate() const {
  const Index d = H0.rows();
  if (d < 1 || H0.cols() != d || H1.rows() != d || H1.cols() != d || B.rows() != d ||
      B.cols() != d) {
    throw InvalidInput("production pair matrices must all be d x d");
  }
  if (!(condition_number(H0) <= kMaxCondition)) throw InvalidInput("H0 is numerically singular");
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      if (i != j && B(i, j) != 0.0) throw InvalidInput("B must be diagonal");
    }
    if (!(B(i, i) > 0.0 && B(i, i) < 1.0) && !(B(i, i) == 1.0 && H0 == H1)) {
      throw InvalidInput("B diagonal entries must lie in (0, 1)");
    }
  }
  if ((H0.transpose() * H1 - B).cwiseAbs().maxCoeff() > kPairTolerance) {
    throw InvalidInput("H0^T H1 does not reproduce B");
  }
}

ProductionPair gen_comonotone_pair(Index d, std::uint64_t seed) {
  if (d < 1) throw InvalidInput("gen_comonotone_pair: d must be >= 1");
  for (std::uint64_t s = seed;; ++s) {
    std::mt19937_64 rng(s);
    ProductionPair pair;
    pair.seed = s;
    pair.H0.resize(d, d);
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) pair.H0(i, j) = i == j ? 1.0 : open_unit(rng);
    }
    pair.B = Eigen::MatrixXd::Zero(d, d);
    for (Index i = 0; i < d; ++i) pair.B(i, i) = open_unit(rng);
    if (!(condition_number(pair.H0) <= kMaxCondition)) continue;
    pair.H1 = pair.H0.transpose().partialPivLu().solve(pair.B);
    return pair;
  }
}

ProductionPair illustrative_pair() {
  ProductionPair pair;
  pair.H0.resize(2, 2);
  pair.H0 << 1.0, 0.5, 0.5, 1.0;
  pair.H1.resize(2, 2);
  pair.H1 << 1.0, -0.5, -0.5, 1.0;
  pair.B = pair.H0.transpose() * pair.H1;
  return pair;
}

ProductionPair identity_pair(Index d) {
  if (d < 1) throw InvalidInput("identity_pair: d must be >= 1");
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  return {eye, eye, eye, 0};
}

std::string_view family_name(LatentFamily family) {
  switch (family) {
    case LatentFamily::kBivariateGamma:
      return "bivariate-gamma";
    case LatentFamily::kGaussianMixture2d:
      return "gaussian-mixture-2d";
    case LatentFamily::kMultivariateGamma:
      return "multivariate-gamma";
  }
  return "unknown";
}

LatentFamily parse_family(std::string_view name) {
  for (LatentFamily f : {LatentFamily::kBivariateGamma, LatentFamily::kGaussianMixture2d,
                         LatentFamily::kMultivariateGamma}) {
    if (family_name(f) == name) return f;
  }
  throw InvalidInput("unknown latent family '" + std::string(name) + "'");
}

void LatentSpec::validate() const {
  if (control.empty()) throw InvalidInput("latent spec needs dimension >= 1");
  if (treatment.size() != control.size()) {
    throw InvalidInput("control and treatment latents differ in dimension");
  }
  for (const Marginal& m : control) validate_marginal(m);
  for (const Marginal& m : treatment) validate_marginal(m);
}

LatentSpec LatentSpec::bivariate_gamma() {
  return {LatentFamily::kBivariateGamma,
          {GammaMarginal{2.0, 3.0}, GammaMarginal{3.0, 2.0}},
          {GammaMarginal{3.0, 2.0}, GammaMarginal{2.0, 3.0}}};
}

LatentSpec LatentSpec::gaussian_mixture_2d() {
  return {LatentFamily::kGaussianMixture2d,
          {two_bumps(1.0, 5.0), two_bumps(2.0, 4.0)},
          {two_bumps(2.0, 4.0), two_bumps(1.0, 5.0)}};
}

LatentSpec LatentSpec::multivariate_gamma(Index d) {
  if (d < 1) throw InvalidInput("multivariate_gamma: d must be >= 1");
  const auto n = static_cast<std::size_t>(d);
  return {LatentFamily::kMultivariateGamma,
          std::vector<Marginal>(n, GammaMarginal{2.0, 3.0}),
          std::vector<Marginal>(n, GammaMarginal{3.0, 2.0})};
}

LatentSpec LatentSpec::for_family(LatentFamily family, Index d) {
  switch (family) {
    case LatentFamily::kBivariateGamma:
      if (d != 2) throw InvalidInput("bivariate-gamma is two-dimensional");
      return bivariate_gamma();
    case LatentFamily::kGaussianMixture2d:
      if (d != 2) throw InvalidInput("gaussian-mixture-2d is two-dimensional");
      return gaussian_mixture_2d();
    case LatentFamily::kMultivariateGamma:
      return multivariate_gamma(d);
  }
  throw InvalidInput("unknown latent family");
}

EmpiricalMeasure sample_latent(const LatentSpec& spec, Group group, Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("sample_latent: n must be >= 1");
  spec.validate();
  const std::vector<Marginal>& marginals = group == Group::kControl ? spec.control : spec.treatment;
  std::mt19937_64 rng(seed);
  const MarginalSampler draw{rng};
  Eigen::MatrixXd points(n, spec.dim());
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < spec.dim(); ++c) {
      points(i, c) = std::visit(draw, marginals[static_cast<std::size_t>(c)]);
    }
  }
  return EmpiricalMeasure::uniform(std::move(points));
}

EmpiricalMeasure apply_production(const Eigen::MatrixXd& H, const EmpiricalMeasure& latent) {
  if (H.cols() != latent.dim()) throw InvalidInput("production matrix does not match latent dimension");
  Eigen::MatrixXd out = latent.points() * H.transpose();
  return {std::move(out), latent.weights()};
}

DatasetQuad generate_quad(const LatentSpec& spec, const ProductionPair& prod, Index n,
                          std::uint64_t seed, const QuadOptions& options) {
  if (prod.dim() != spec.dim()) {
    throw InvalidInput("production pair dimension " + std::to_string(prod.dim()) +
                       " does not match latent dimension " + std::to_string(spec.dim()));
  }
  const EmpiricalMeasure a = sample_latent(spec, Group::kControl, n, derive_seed(seed, 0));
  const EmpiricalMeasure c = sample_latent(spec, Group::kTreatment, n, derive_seed(seed, 2));
  const EmpiricalMeasure b =
      options.coupled ? a : sample_latent(spec, Group::kControl, n, derive_seed(seed, 1));
  const EmpiricalMeasure d =
      options.coupled ? c : sample_latent(spec, Group::kTreatment, n, derive_seed(seed, 3));
  return {apply_production(prod.H0, a),
          apply_production(prod.H1, b),
          apply_production(prod.H0, c),
          apply_production(prod.H1, d),
          seed,
          prod.seed,
          spec.family,
          options.coupled};
}

void write_measure_csv(const std::filesystem::path& path, const EmpiricalMeasure& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (Index c = 0; c < m.dim(); ++c) out << "dim_" << c << ',';
  out << "weight\n";
  for (Index i = 0; i < m.size(); ++i) {
    for (Index c = 0; c < m.dim(); ++c) out << fmt17(m.points()(i, c)) << ',';
    out << fmt17(m.weight(i)) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

EmpiricalMeasure read_measure_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) header.push_back(field);
  }
  if (header.size() < 2 || header.back() != "weight") {
    throw ParseError(1, "header must be dim_0,...,dim_{d-1},weight");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t c = 0; c < d; ++c) {
    if (header[c] != "dim_" + std::to_string(c)) throw ParseError(1, "unexpected column " + header[c]);
  }

  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t fields = 0;
    const char* p = line.data();
    const char* end = p + line.size();
    while (true) {
      double v = 0.0;
      const auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc() || (next != end && *next != ',')) {
        throw ParseError(line_no, "invalid number");
      }
      values.push_back(v);
      ++fields;
      if (next == end) break;
      p = next + 1;
    }
    if (fields != d + 1) {
      throw ParseError(line_no, "expected " + std::to_string(d + 1) + " fields, got " +
                                    std::to_string(fields));
    }
  }
  const Index n = static_cast<Index>(values.size() / (d + 1));
  if (n == 0) throw ParseError(line_no, "no atoms");
  Eigen::MatrixXd points(n, static_cast<Index>(d));
  Eigen::VectorXd weights(n);
  for (Index i = 0; i < n; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) * (d + 1);
    for (std::size_t c = 0; c < d; ++c) points(i, static_cast<Index>(c)) = values[row + c];
    weights[i] = values[row + d];
  }
  return {std::move(points), std::move(weights)};
}

void write_quad(const std::filesystem::path& dir, const DatasetQuad& quad) {
  std::filesystem::create_directories(dir);
  write_measure_csv(dir / "y0c.csv", quad.y0c);
  write_measure_csv(dir / "y1c.csv", quad.y1c);
  write_measure_csv(dir / "y0t.csv", quad.y0t);
  write_measure_csv(dir / "y1t_star.csv", quad.y1t_star);
  std::ofstream meta(dir / "meta.csv");
  meta << "key,value\n"
       << "family," << family_name(quad.family) << '\n'
       << "n," << quad.y0c.size() << '\n'
       << "d," << quad.dim() << '\n'
       << "seed," << quad.seed << '\n'
       << "pair_seed," << quad.pair_seed << '\n'
       << "coupled," << (quad.coupled ? 1 : 0) << '\n';
  if (!meta) throw std::runtime_error("write failed for " + (dir / "meta.csv").string());
}

}  // namespace rotcic
