#pragma once

#include "sphvar/besov.hpp"
#include "sphvar/estimators.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace sphvar {

/// Unit-variance noise laws for eps in Y = g(X) + sigma(X) eps.
enum class NoiseFamily { gaussian, rademacher, uniform };

NoiseFamily parse_noise_family(const std::string& name);
std::string to_string(NoiseFamily f);
/// Standardized third and fourth moments: (0, 3), (0, 1), (0, 1.8).
double noise_gamma3(NoiseFamily f);
double noise_gamma4(NoiseFamily f);
double draw_noise(NoiseFamily f, RandomStream& rng);

struct HarmonicTerm {
  int l = 0;
  int m = 0;
  double coeff = 0.0;
};

/// A test function: constant + finite harmonic combination, or constant +
/// a Besov-ball sample synthesized from scales 0..j_max.
struct FunctionSpec {
  enum class Kind { harmonics, besov };

  Kind kind = Kind::harmonics;
  double constant = 0.0;
  std::vector<HarmonicTerm> terms;

  BesovParams besov;
  double sparsity = 1.0;
  std::uint64_t seed = 0;
  double B = 2.0;
  int j_max = 4;

  /// Harmonic expansion of the function (exact; Besov samples are
  /// band-limited by construction).
  HarmonicExpansion expansion() const;

  static FunctionSpec constant_function(double c);
};

void to_json(nlohmann::json& j, const FunctionSpec& f);
void from_json(const nlohmann::json& j, FunctionSpec& f);

/// Smoothness/integrability pairs fed to rate_exponent for the theory line.
struct TheorySpec {
  int case_id = 3;
  double alpha = 2.0;
  double beta = 2.0;
  double rho = 2.0;
  double mu = 2.0;
};

/// Full description of a simulation study. `variance` describes sigma^2.
struct ScenarioSpec {
  FunctionSpec g = FunctionSpec::constant_function(0.0);
  FunctionSpec variance = FunctionSpec::constant_function(1.0);
  double v0 = 0.1;  // 0 disables the floor (noiseless checks); negativity is always rejected
  NoiseFamily noise = NoiseFamily::gaussian;
  std::vector<std::size_t> N_grid{1024, 4096, 16384};
  int replicates = 20;
  double p = 2.0;
  EstimatorConfig estimator;
  /// Replace kappa_g / kappa_h, kappa_v by universal_kappa from the truth.
  bool universal_kappa = false;
  TheorySpec theory;
  double tolerance = 0.0;  // 0 means 0.2 p
  std::uint64_t seed = 1;
  bool known_mean = false;
  int threads = 1;

  nlohmann::json to_json() const;
  /// Throws ScenarioError on missing or malformed fields.
  static ScenarioSpec from_json(const nlohmann::json& j);
  static ScenarioSpec load(const std::string& path);
};

/// A validated scenario with its truths resolved on the estimation frame.
class Scenario {
 public:
  /// Audits sigma^2 >= v0 on 10^4 uniform points and on the risk grid;
  /// throws ScenarioError otherwise.
  explicit Scenario(ScenarioSpec spec);

  const ScenarioSpec& spec() const { return spec_; }
  const EstimatorConfig& config() const { return config_; }
  std::shared_ptr<const NeedletFrame> frame() const { return frame_; }

  const HarmonicExpansion& g() const { return g_; }
  const HarmonicExpansion& variance() const { return V_; }
  /// Truths on the frame's finest grid.
  const Eigen::VectorXd& g_on_grid() const { return g_grid_; }
  const Eigen::VectorXd& variance_on_grid() const { return V_grid_; }

 private:
  ScenarioSpec spec_;
  EstimatorConfig config_;
  std::shared_ptr<const NeedletFrame> frame_;
  HarmonicExpansion g_;
  HarmonicExpansion V_;
  Eigen::VectorXd g_grid_;
  Eigen::VectorXd V_grid_;
};

/// N samples of Y = g(X) + sqrt(V(X)) eps; deterministic in `seed`.
Dataset generate_dataset(const Scenario& scenario, std::size_t N, std::uint64_t seed);

}  // namespace sphvar
