#pragma once

#include "sphvar/cubature.hpp"
#include "sphvar/harmonics.hpp"
#include "sphvar/window.hpp"

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace sphvar {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Frame construction parameters; serializable as `key = value` lines.
struct FrameParams {
  double B = 2.0;
  int j_max = 5;
  int grid_resolution = Window::kDefaultResolution;

  std::string to_text() const;
  /// Parses `key = value` lines; blank lines and `#` comments are ignored.
  static FrameParams from_text(const std::string& text);
  bool operator==(const FrameParams&) const = default;
};

/// Immutable needlet system.
///
/// Scale j = 0..j_max covers multipoles ceil(B^{j-1}) <= l <= floor(B^{j+1})
/// weighted by b(l / B^j); the extra scaling band carries the l = 0
/// projection so that constants are representable. Each scale owns the
/// product grid of exactness 2 floor(B^{j+1}).
///
/// Exact analysis/synthesis round trips hold for functions band-limited to
/// l <= B^{j_max}, where the window partition of unity is complete.
class NeedletFrame {
 public:
  explicit NeedletFrame(const FrameParams& params);
  NeedletFrame(double B, int j_max, int grid_resolution = Window::kDefaultResolution)
      : NeedletFrame(FrameParams{B, j_max, grid_resolution}) {}

  const FrameParams& params() const { return params_; }
  double B() const { return params_.B; }
  int j_max() const { return params_.j_max; }
  int num_scales() const { return params_.j_max + 1; }
  const Window& window() const { return window_; }

  int band_low(int j) const;
  int band_high(int j) const;
  /// Highest multipole touched by any scale.
  int max_degree() const { return band_high(j_max()); }

  const CubatureGrid& grid(int j) const;
  const CubatureGrid& finest_grid() const { return grids_.back(); }
  int K(int j) const { return grid(j).size(); }

  /// b(l / B^j) for l = 0..band_high(j); zero outside the band.
  const Eigen::VectorXd& band_weights(int j) const;

  /// Zonal profile F_j(t) = sum_l b(l/B^j) (2l+1)/(4 pi) P_l(t), so that
  /// psi_jk(x) = sqrt(lambda_jk) F_j(<xi_jk, x>).
  double profile(int j, double t) const;

 private:
  void check_scale(int j) const;

  FrameParams params_;
  Window window_;
  std::vector<CubatureGrid> grids_;
  std::vector<Eigen::VectorXd> band_weights_;
};

/// Needlet coefficients: one scaling coefficient plus K_j values per scale.
struct CoefficientPyramid {
  double scaling = 0.0;
  std::vector<Eigen::VectorXd> bands;

  static CoefficientPyramid zeros(const NeedletFrame& frame);
  int num_bands() const { return static_cast<int>(bands.size()); }
  bool matches(const NeedletFrame& frame) const;
  /// Throws ShapeError unless matches(frame).
  void check_shape(const NeedletFrame& frame) const;
  /// Sum of squares over scaling and all bands.
  double energy() const;
  bool operator==(const CoefficientPyramid& o) const;
};

using PointFunction = std::function<double(const Direction&)>;

/// psi_jk(p) = sqrt(lambda_jk) sum_{l in band j} b(l/B^j) (2l+1)/(4 pi) P_l(cos d(xi_jk, p)).
double evaluate_needlet(const NeedletFrame& frame, int j, int k, const Direction& p);

/// ||psi_jk||_p, from the zonal profile by 1-D quadrature; p may be kInfinity.
double needlet_norm(const NeedletFrame& frame, int j, int k, double p);

/// f_jk = int f psi_jk over the finest grid; scaling = int f Y_00.
CoefficientPyramid analyze(const NeedletFrame& frame, const PointFunction& f);

/// Same as analyze but from values already sampled on the finest grid.
CoefficientPyramid analyze_grid_values(const NeedletFrame& frame, const Eigen::VectorXd& values);

/// Needlet coefficients of a harmonic expansion. Scales above `top_scale`
/// are left zero (top_scale < 0 means j_max).
CoefficientPyramid analyze_expansion(const NeedletFrame& frame, const HarmonicExpansion& f, int top_scale = -1);

/// Harmonic coefficients of sum_jk c_jk psi_jk + scaling Y_00.
HarmonicExpansion pyramid_to_expansion(const NeedletFrame& frame, const CoefficientPyramid& coeffs);

/// Pointwise reconstruction at arbitrary points.
Eigen::VectorXd synthesize(const NeedletFrame& frame, const CoefficientPyramid& coeffs, std::span<const Direction> points);

/// Reconstruction at the finest grid's nodes.
Eigen::VectorXd synthesize_on_finest_grid(const NeedletFrame& frame, const CoefficientPyramid& coeffs);

}  // namespace sphvar
