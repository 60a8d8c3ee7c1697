#include "sphvar/estimators.hpp"

#include "sphvar/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sphvar {
namespace {

constexpr Eigen::Index kChunk = 512;

void check_level(const NeedletFrame& frame, int J_N) {
  if (J_N < 1) throw ParameterError("resolution level must be >= 1");
  if (J_N - 1 > frame.j_max()) {
    throw ParameterError("frame has j_max = " + std::to_string(frame.j_max()) + " but the estimator needs scale " +
                         std::to_string(J_N - 1));
  }
}

std::vector<Direction> positions(const Dataset& data) {
  std::vector<Direction> x;
  x.reserve(data.size());
  for (const auto& s : data) x.push_back(s.X);
  return x;
}

void check_finite(const Dataset& data) {
  if (data.empty()) throw DataError("empty dataset");
  for (const auto& s : data) {
    if (!std::isfinite(s.Y)) throw DataError("non-finite response in dataset");
  }
}

CoefficientPyramid from_moments(const NeedletFrame& frame, const Eigen::VectorXd& m, int J_N) {
  const int deg = frame.band_high(J_N - 1);
  return analyze_expansion(frame, HarmonicExpansion(deg, m.head(harmonic_count(deg))), J_N - 1);
}

CoefficientPyramid empirical_coeffs(const Dataset& data, const NeedletFrame& frame, int J_N, int power) {
  check_finite(data);
  check_level(frame, J_N);
  Eigen::MatrixXd W(static_cast<Eigen::Index>(data.size()), 1);
  for (std::size_t i = 0; i < data.size(); ++i) W(static_cast<Eigen::Index>(i), 0) = power == 1 ? data[i].Y : data[i].Y * data[i].Y;
  const Eigen::MatrixXd M = harmonic_moments(positions(data), W, frame.band_high(J_N - 1));
  return from_moments(frame, M.col(0), J_N);
}

}  // namespace

void EstimatorConfig::validate() const {
  if (!(B > 1.0)) throw ParameterError("EstimatorConfig: B must exceed 1");
  if (!(kappa_g > 0.0 && kappa_h > 0.0 && kappa_v > 0.0)) throw ParameterError("EstimatorConfig: kappas must be positive");
  if (J_override && *J_override < 1) throw ParameterError("EstimatorConfig: J override must be >= 1");
}

double tau_N(std::size_t N) {
  if (N < 2) throw ParameterError("tau_N: need N >= 2");
  const double n = static_cast<double>(N);
  return std::sqrt(std::log(n) / n);
}

int jmax_rule(std::size_t N, double B) {
  if (N < 8) throw ParameterError("jmax_rule: need N >= 8");
  if (!(B > 1.0)) throw ParameterError("jmax_rule: B must exceed 1");
  const double n = static_cast<double>(N);
  const double level = 0.5 * std::log(n / std::log(n)) / std::log(B);
  return std::max(1, static_cast<int>(std::floor(level + 1e-12)));
}

int resolution_level(std::size_t N, const EstimatorConfig& config) {
  return config.J_override ? *config.J_override : jmax_rule(N, config.B);
}

double universal_kappa(const NeedletFrame& frame, int top_scale, double mean_square) {
  if (!(mean_square > 0.0)) throw ParameterError("universal_kappa: mean square must be positive");
  double worst = 0.0;
  for (int j = 0; j <= std::min(top_scale, frame.j_max()); ++j) {
    const CubatureGrid& g = frame.grid(j);
    Eigen::Index k = 0;
    g.weights.maxCoeff(&k);
    worst = std::max(worst, std::pow(needlet_norm(frame, j, static_cast<int>(k), 2.0), 2));
  }
  return std::sqrt(2.0 * kFourPi * mean_square * worst);
}

Eigen::MatrixXd harmonic_moments(std::span<const Direction> X, const Eigen::MatrixXd& W, int degree) {
  const auto n = static_cast<Eigen::Index>(X.size());
  if (n == 0) throw DataError("harmonic_moments: no points");
  if (W.rows() != n) throw ShapeError("harmonic_moments: weight rows do not match point count");
  HarmonicTable table(degree);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(table.size(), W.cols());
  Eigen::MatrixXd T(table.size(), kChunk);
  for (Eigen::Index start = 0; start < n; start += kChunk) {
    const Eigen::Index len = std::min(kChunk, n - start);
    for (Eigen::Index i = 0; i < len; ++i) table.evaluate(X[static_cast<std::size_t>(start + i)], T.col(i));
    M.noalias() += T.leftCols(len) * W.middleRows(start, len);
  }
  return M * (kFourPi / static_cast<double>(n));
}

CoefficientPyramid empirical_mean_coeffs(const Dataset& data, const NeedletFrame& frame, int J_N) {
  return empirical_coeffs(data, frame, J_N, 1);
}

CoefficientPyramid empirical_h_coeffs(const Dataset& data, const NeedletFrame& frame, int J_N) {
  return empirical_coeffs(data, frame, J_N, 2);
}

CoefficientPyramid hard_threshold(const CoefficientPyramid& coeffs, double kappa, std::size_t N) {
  if (!(kappa > 0.0)) throw ParameterError("hard_threshold: kappa must be positive");
  const double level = kappa * tau_N(N);
  CoefficientPyramid out = coeffs;
  for (auto& b : out.bands) b = (b.array().abs() >= level).select(b, 0.0);
  return out;
}

FunctionEstimate::FunctionEstimate(std::shared_ptr<const NeedletFrame> frame, CoefficientPyramid coeffs, int top_scale)
    : frame_(std::move(frame)), top_scale_(top_scale), linear_(std::move(coeffs)) {
  if (!frame_) throw ParameterError("FunctionEstimate: null frame");
  linear_.check_shape(*frame_);
  linear_expansion_ = pyramid_to_expansion(*frame_, linear_);
}

FunctionEstimate FunctionEstimate::product(const FunctionEstimate& a, const FunctionEstimate& b, int top_scale,
                                           double weight) {
  if (a.has_products() || b.has_products()) throw ParameterError("FunctionEstimate::product: factors must be linear");
  if (a.frame().params() != b.frame().params()) throw ShapeError("FunctionEstimate::product: frames differ");
  FunctionEstimate out(a.frame_, CoefficientPyramid::zeros(a.frame()), top_scale);
  auto trimmed = [](const FunctionEstimate& f) {
    return f.linear_expansion_.resized(f.frame().band_high(std::clamp(f.top_scale_, 0, f.frame().j_max())));
  };
  out.products_.push_back({weight, trimmed(a), trimmed(b)});
  return out;
}

FunctionEstimate& FunctionEstimate::add(const FunctionEstimate& other, double weight) {
  if (frame().params() != other.frame().params()) throw ShapeError("FunctionEstimate::add: frames differ");
  linear_.scaling += weight * other.linear_.scaling;
  for (int j = 0; j < linear_.num_bands(); ++j) linear_.bands[j] += weight * other.linear_.bands[j];
  linear_expansion_ = linear_expansion_ + weight * other.linear_expansion_;
  for (const auto& p : other.products_) products_.push_back({weight * p.weight, p.a, p.b});
  top_scale_ = std::max(top_scale_, other.top_scale_);
  return *this;
}

CoefficientPyramid FunctionEstimate::coefficients() const {
  if (products_.empty()) return linear_;
  CoefficientPyramid c = analyze_grid_values(*frame_, on_grid(frame_->finest_grid()));
  for (int j = std::max(top_scale_ + 1, 0); j < c.num_bands(); ++j) c.bands[j].setZero();
  return c;
}

double FunctionEstimate::evaluate(const Direction& p) const {
  double v = linear_expansion_.evaluate(p);
  for (const auto& t : products_) v += t.weight * t.a.evaluate(p) * t.b.evaluate(p);
  return v;
}

Eigen::VectorXd FunctionEstimate::evaluate(std::span<const Direction> points) const {
  Eigen::VectorXd v = linear_expansion_.evaluate(points);
  for (const auto& t : products_) v += t.weight * t.a.evaluate(points).cwiseProduct(t.b.evaluate(points));
  return v;
}

Eigen::VectorXd FunctionEstimate::on_grid(const CubatureGrid& grid) const {
  Eigen::VectorXd v = synthesize_on_grid(grid, linear_expansion_);
  for (const auto& t : products_) v += t.weight * synthesize_on_grid(grid, t.a).cwiseProduct(synthesize_on_grid(grid, t.b));
  return v;
}

FunctionEstimate estimate_mean(const Dataset& data, std::shared_ptr<const NeedletFrame> frame, const EstimatorConfig& config) {
  config.validate();
  const int J = resolution_level(data.size(), config);
  CoefficientPyramid c = hard_threshold(empirical_mean_coeffs(data, *frame, J), config.kappa_g, data.size());
  return {std::move(frame), std::move(c), J - 1};
}

std::pair<Dataset, Dataset> split_sample(const Dataset& data) {
  std::pair<Dataset, Dataset> out;
  out.first.reserve((data.size() + 1) / 2);
  out.second.reserve(data.size() / 2);
  for (std::size_t i = 0; i < data.size(); ++i) (i % 2 == 0 ? out.first : out.second).push_back(data[i]);
  return out;
}

namespace {

// Thresholded pyramids of g on both halves and of h on the full sample, from
// a single pass over the data.
struct VarianceParts {
  CoefficientPyramid h;
  CoefficientPyramid g1;
  CoefficientPyramid g2;
  int J_full;
  int J_half;
};

VarianceParts variance_parts(const Dataset& data, const NeedletFrame& frame, const EstimatorConfig& config) {
  config.validate();
  check_finite(data);
  const std::size_t N = data.size();
  if (N < 2) throw DataError("variance estimation needs at least two samples");
  const std::size_t N_half = N / 2;
  const int J = resolution_level(N, config);
  const int J_half = resolution_level(N_half, config);
  check_level(frame, J);
  check_level(frame, J_half);

  const auto n = static_cast<Eigen::Index>(N);
  const double n1 = static_cast<double>((N + 1) / 2), n2 = static_cast<double>(N / 2);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = data[static_cast<std::size_t>(i)].Y;
    W(i, 0) = y * y;
    // Rescaled so the 1/N normalization becomes 1/|half|.
    if (i % 2 == 0) {
      W(i, 1) = y * (static_cast<double>(N) / n1);
    } else {
      W(i, 2) = y * (static_cast<double>(N) / n2);
    }
  }
  const int degree = frame.band_high(std::max(J, J_half) - 1);
  const Eigen::MatrixXd M = harmonic_moments(positions(data), W, degree);
  VarianceParts parts;
  parts.J_full = J;
  parts.J_half = J_half;
  parts.h = hard_threshold(from_moments(frame, M.col(0), J), config.kappa_h, N);
  parts.g1 = hard_threshold(from_moments(frame, M.col(1), J_half), config.kappa_g, N_half);
  parts.g2 = hard_threshold(from_moments(frame, M.col(2), J_half), config.kappa_g, N_half);
  return parts;
}

FunctionEstimate gsquared_from(const VarianceParts& parts, const std::shared_ptr<const NeedletFrame>& frame, double weight) {
  const FunctionEstimate g1(frame, parts.g1, parts.J_half - 1);
  const FunctionEstimate g2(frame, parts.g2, parts.J_half - 1);
  return FunctionEstimate::product(g1, g2, parts.J_full - 1, weight);
}

}  // namespace

FunctionEstimate estimate_gsquared(const Dataset& data, std::shared_ptr<const NeedletFrame> frame,
                                   const EstimatorConfig& config) {
  return gsquared_from(variance_parts(data, *frame, config), frame, 1.0);
}

FunctionEstimate estimate_variance(const Dataset& data, std::shared_ptr<const NeedletFrame> frame,
                                   const EstimatorConfig& config) {
  const VarianceParts parts = variance_parts(data, *frame, config);
  FunctionEstimate v(frame, parts.h, parts.J_full - 1);
  v.add(gsquared_from(parts, frame, 1.0), -1.0);
  return v;
}

FunctionEstimate estimate_variance_known_mean(const Dataset& data, const Eigen::VectorXd& g_squared_on_finest_grid,
                                              std::shared_ptr<const NeedletFrame> frame, const EstimatorConfig& config) {
  config.validate();
  const int J = resolution_level(data.size(), config);
  CoefficientPyramid v = empirical_h_coeffs(data, *frame, J);
  const CoefficientPyramid g2 = analyze_grid_values(*frame, g_squared_on_finest_grid);
  v.scaling -= g2.scaling;
  for (int j = 0; j < J; ++j) v.bands[j] -= g2.bands[j];
  return {frame, hard_threshold(v, config.kappa_v, data.size()), J - 1};
}

FunctionEstimate estimate_variance_known_mean(const Dataset& data, const PointFunction& g_true,
                                              std::shared_ptr<const NeedletFrame> frame, const EstimatorConfig& config) {
  const CubatureGrid& grid = frame->finest_grid();
  Eigen::VectorXd g2(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double g = g_true(grid.nodes[i]);
    g2[i] = g * g;
  }
  return estimate_variance_known_mean(data, g2, std::move(frame), config);
}

}  // namespace sphvar
