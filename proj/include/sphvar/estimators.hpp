#pragma once

#include "sphvar/frame.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace sphvar {

/// One observation Y = g(X) + sigma(X) eps.
struct RegressionSample {
  Direction X;
  double Y = 0.0;
};

using Dataset = std::vector<RegressionSample>;

/// Threshold constants and truncation. All logarithms are natural.
struct EstimatorConfig {
  double B = 2.0;
  double kappa_g = 1.0;
  double kappa_h = 1.0;
  double kappa_v = 1.0;
  std::optional<int> J_override;

  /// Throws ParameterError for non-positive kappas or B <= 1.
  void validate() const;
};

/// sqrt(ln N / N). Throws ParameterError for N < 2.
double tau_N(std::size_t N);

/// J_N = max(1, floor(log_B sqrt(N / ln N))). Throws ParameterError for N < 8.
int jmax_rule(std::size_t N, double B);

/// Resolution level used for a sample of size N under `config`.
int resolution_level(std::size_t N, const EstimatorConfig& config);

/// Universal-threshold constant for a summand W (Y for g, Y^2 for h) with
/// mean square m = E[W^2]: each empirical coefficient has N Var <= C with
/// C = 4 pi m max_jk ||psi_jk||_2^2 over scales j <= top_scale, and
/// kappa = sqrt(2 C) keeps the largest of ~N / ln N pure-noise coefficients
/// below kappa tau_N.
double universal_kappa(const NeedletFrame& frame, int top_scale, double mean_square);

/// Empirical harmonic moments
///   M(lm, c) = (4 pi / N) sum_i Y_lm(X_i) W(i, c),  l <= degree.
/// Evaluated in chunks as one matrix product per chunk.
Eigen::MatrixXd harmonic_moments(std::span<const Direction> X, const Eigen::MatrixXd& W, int degree);

/// g_jk = (4 pi / N) sum_i Y_i psi_jk(X_i) for j < J_N; scaling from Y_00.
/// Bands at j >= J_N are zero. Throws DataError for empty data and
/// ParameterError when J_N - 1 exceeds the frame's j_max.
CoefficientPyramid empirical_mean_coeffs(const Dataset& data, const NeedletFrame& frame, int J_N);

/// As empirical_mean_coeffs with Y_i^2 in place of Y_i.
CoefficientPyramid empirical_h_coeffs(const Dataset& data, const NeedletFrame& frame, int J_N);

/// Zeroes needlet coefficients with |c| < kappa tau_N; |c| >= kappa tau_N is
/// kept. The scaling coefficient is never thresholded.
CoefficientPyramid hard_threshold(const CoefficientPyramid& coeffs, double kappa, std::size_t N);

/// A function on the sphere held as a needlet pyramid plus weighted pointwise
/// products of band-limited factors. Products are evaluated lazily; their
/// needlet coefficients are only formed on request.
class FunctionEstimate {
 public:
  FunctionEstimate(std::shared_ptr<const NeedletFrame> frame, CoefficientPyramid coeffs, int top_scale);

  /// weight * a * b pointwise. Both factors must be product-free.
  static FunctionEstimate product(const FunctionEstimate& a, const FunctionEstimate& b, int top_scale, double weight = 1.0);

  /// *this += weight * other.
  FunctionEstimate& add(const FunctionEstimate& other, double weight = 1.0);

  const NeedletFrame& frame() const { return *frame_; }
  std::shared_ptr<const NeedletFrame> frame_ptr() const { return frame_; }
  int top_scale() const { return top_scale_; }
  bool has_products() const { return !products_.empty(); }

  /// Needlet coefficients. Exact for product-free estimates; otherwise the
  /// analysis of the function on the finest grid, truncated above top_scale.
  CoefficientPyramid coefficients() const;

  double evaluate(const Direction& p) const;
  Eigen::VectorXd evaluate(std::span<const Direction> points) const;
  Eigen::VectorXd on_grid(const CubatureGrid& grid) const;

 private:
  struct Product {
    double weight;
    HarmonicExpansion a;
    HarmonicExpansion b;
  };

  std::shared_ptr<const NeedletFrame> frame_;
  int top_scale_;
  CoefficientPyramid linear_;
  HarmonicExpansion linear_expansion_;
  std::vector<Product> products_;
};

/// Hard-thresholded mean estimate at level J_N (kappa_g).
FunctionEstimate estimate_mean(const Dataset& data, std::shared_ptr<const NeedletFrame> frame, const EstimatorConfig& config);

/// Even positions go to the first half, odd to the second; sizes
/// (ceil(N/2), floor(N/2)).
std::pair<Dataset, Dataset> split_sample(const Dataset& data);

/// g1 * g2 from mean estimates on the two halves, thresholded at
/// kappa_g tau_{N'} with N' = floor(N/2) and truncated at J_{N'}.
FunctionEstimate estimate_gsquared(const Dataset& data, std::shared_ptr<const NeedletFrame> frame,
                                   const EstimatorConfig& config);

/// V = h - g1 g2, with h thresholded at kappa_h on the full sample.
FunctionEstimate estimate_variance(const Dataset& data, std::shared_ptr<const NeedletFrame> frame,
                                   const EstimatorConfig& config);

/// Known-mean variant: v_jk = h_jk - (g^2)_jk thresholded at kappa_v, where
/// (g^2)_jk comes from analyzing g_true^2 on the finest grid.
FunctionEstimate estimate_variance_known_mean(const Dataset& data, const PointFunction& g_true,
                                              std::shared_ptr<const NeedletFrame> frame, const EstimatorConfig& config);

/// Same, with g_true^2 already sampled on the finest grid.
FunctionEstimate estimate_variance_known_mean(const Dataset& data, const Eigen::VectorXd& g_squared_on_finest_grid,
                                              std::shared_ptr<const NeedletFrame> frame, const EstimatorConfig& config);

}  // namespace sphvar
