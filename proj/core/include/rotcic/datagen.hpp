#pragma once

#include "rotcic/measure.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rotcic {

/// Linear production functions h_t(u) = H_t u with H0^T H1 = B diagonal in
/// (0,1), which makes the pair co-monotone.
struct ProductionPair {
  Eigen::MatrixXd H0;
  Eigen::MatrixXd H1;
  Eigen::MatrixXd B;
  std::uint64_t seed = 0;  // seed that produced the pair (0 for fixed pairs)

  Index dim() const noexcept { return H0.rows(); }
  /// Throws InvalidInput when the invariants fail.
  void validate() const;
};

/// H0 with unit diagonal and Uniform(0,1) off-diagonal entries, B diagonal
/// Uniform(0,1), H1 = H0^{-T} B. A draw whose H0 has condition number above
/// 1e12 is replaced by the draw for seed + 1, and so on.
ProductionPair gen_comonotone_pair(Index d, std::uint64_t seed);

/// The 2x2 pair of the illustrative experiment:
/// H0 = [[1, .5], [.5, 1]], H1 = [[1, -.5], [-.5, 1]].
ProductionPair illustrative_pair();

ProductionPair identity_pair(Index d);

struct GammaMarginal {
  double shape = 1.0;
  double scale = 1.0;  // mean = shape * scale
};

struct NormalMixtureMarginal {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> sds;
};

using Marginal = std::variant<GammaMarginal, NormalMixtureMarginal>;

enum class LatentFamily { kBivariateGamma, kGaussianMixture2d, kMultivariateGamma };

std::string_view family_name(LatentFamily family);
/// Parses "bivariate-gamma", "gaussian-mixture-2d" or "multivariate-gamma".
LatentFamily parse_family(std::string_view name);

/// Latent distributions with independent coordinates, one marginal per
/// coordinate and group.
struct LatentSpec {
  LatentFamily family = LatentFamily::kBivariateGamma;
  std::vector<Marginal> control;
  std::vector<Marginal> treatment;

  Index dim() const noexcept { return static_cast<Index>(control.size()); }
  void validate() const;

  /// Control Gamma(2,3) x Gamma(3,2); treatment has the coordinates swapped.
  static LatentSpec bivariate_gamma();
  /// Control (.5 N(1,1) + .5 N(5,1)) x (.5 N(2,1) + .5 N(4,1)); treatment swapped.
  static LatentSpec gaussian_mixture_2d();
  /// Control i.i.d. Gamma(2,3), treatment i.i.d. Gamma(3,2) in every coordinate.
  static LatentSpec multivariate_gamma(Index d);
  static LatentSpec for_family(LatentFamily family, Index d);
};

enum class Group { kControl, kTreatment };

/// n i.i.d. latent draws with uniform weights; deterministic per seed.
EmpiricalMeasure sample_latent(const LatentSpec& spec, Group group, Index n, std::uint64_t seed);

/// Applies u -> H u to every atom.
EmpiricalMeasure apply_production(const Eigen::MatrixXd& H, const EmpiricalMeasure& latent);

struct DatasetQuad {
  EmpiricalMeasure y0c;
  EmpiricalMeasure y1c;
  EmpiricalMeasure y0t;
  EmpiricalMeasure y1t_star;  // ground-truth counterfactual
  std::uint64_t seed = 0;
  std::uint64_t pair_seed = 0;
  LatentFamily family = LatentFamily::kBivariateGamma;
  bool coupled = false;

  Index dim() const noexcept { return y0c.dim(); }
};

struct QuadOptions {
  /// Reuse the same latent draws at t = 0 and t = 1 within each group
  /// instead of drawing them afresh.
  bool coupled = false;
};

/// y0c = H0 A, y1c = H1 B, y0t = H0 C, y1t* = H1 D with A, B control latent
/// draws and C, D treatment latent draws, all independent (A = B and C = D in
/// coupled mode).
DatasetQuad generate_quad(const LatentSpec& spec, const ProductionPair& prod, Index n,
                          std::uint64_t seed, const QuadOptions& options = {});

/// CSV with header dim_0,...,dim_{d-1},weight and one row per atom.
void write_measure_csv(const std::filesystem::path& path, const EmpiricalMeasure& m);
EmpiricalMeasure read_measure_csv(const std::filesystem::path& path);

/// Writes y0c.csv, y1c.csv, y0t.csv, y1t_star.csv and meta.csv into `dir`.
void write_quad(const std::filesystem::path& dir, const DatasetQuad& quad);

}  // namespace rotcic
