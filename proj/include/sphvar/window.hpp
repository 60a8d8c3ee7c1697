#pragma once

#include <vector>

namespace sphvar {

/// Smooth needlet window b on (0, inf) with support [1/B, B].
///
/// Built from the normalized bump integral
///   Phi(u) = int_{-1}^{u} exp(-1/(1-t^2)) dt / int_{-1}^{1} exp(-1/(1-t^2)) dt,
/// which gives a plateau function phi equal to 1 on [0, 1/B] and 0 on
/// [1, inf). Then b^2(x) = phi(x/B) - phi(x). Phi is tabulated once and read
/// back by monotone cubic Hermite interpolation. Because b^2 is a difference
/// of plateau values, sum_{j>=0} b^2(l/B^j) telescopes to exactly 1 for every
/// integer l >= 1, whatever the interpolation error.
class Window {
 public:
  static constexpr int kDefaultResolution = 4096;

  /// Throws ParameterError for B <= 1 or grid_resolution < 1000.
  Window(double B, int grid_resolution = kDefaultResolution);

  double B() const { return B_; }
  int grid_resolution() const { return static_cast<int>(u_.size()) - 1; }

  /// Smoothed plateau: 1 on [0, 1/B], 0 on [1, inf), nonincreasing.
  double plateau(double t) const;
  double squared(double x) const;
  double operator()(double x) const;

  /// Tabulated Phi on the uniform u grid over [-1, 1].
  const std::vector<double>& samples() const { return phi_; }

 private:
  double bump_integral(double u) const;

  double B_;
  std::vector<double> u_;
  std::vector<double> phi_;
  std::vector<double> slope_;
};

}  // namespace sphvar
