#pragma once

#include "sphvar/harmonics.hpp"
#include "sphvar/sphere.hpp"

#include <Eigen/Dense>

#include <vector>

namespace sphvar {

/// Gauss-Legendre (in cos theta) x equispaced (in phi) product rule.
///
/// Nodes are stored ring-major: node k = ring * n_phi + column, with rings in
/// ascending z and phi_column = 2 pi column / n_phi. Weights are positive and
/// sum to 4 pi; every spherical harmonic of degree <= exactness integrates
/// exactly.
struct CubatureGrid {
  int scale = 0;
  int exactness = 0;
  std::vector<double> ring_z;
  std::vector<double> ring_weight;  // Gauss-Legendre weight x 2 pi / n_phi
  int n_phi = 1;
  std::vector<Direction> nodes;
  Eigen::VectorXd weights;

  int n_rings() const { return static_cast<int>(ring_z.size()); }
  int size() const { return static_cast<int>(nodes.size()); }
  double integrate(const Eigen::VectorXd& values) const { return weights.dot(values); }
};

inline constexpr int kMaxExactness = 4096;

/// Product grid exact to the given harmonic degree. Ring count is
/// ceil((L+1)/2) + 1, column count L + 1. Throws ResourceError above
/// kMaxExactness.
CubatureGrid make_product_grid(int exactness, int scale = 0);

/// Grid for needlet scale j: exactness 2 floor(B^{j+1}). Exactness is checked
/// on a small deterministic sample of harmonic pairs before returning.
CubatureGrid build_cubature(int j, double B);

/// Values of a harmonic expansion at every node (ring-factorized, O(L^3)).
Eigen::VectorXd synthesize_on_grid(const CubatureGrid& grid, const HarmonicExpansion& f);

/// sum_k values_k Y_lm(xi_k) for l <= degree (the adjoint of synthesis).
HarmonicExpansion grid_adjoint(const CubatureGrid& grid, const Eigen::VectorXd& values, int degree);

/// Harmonic coefficients int f Y_lm by the grid's quadrature; exact when f is
/// band-limited to exactness - degree.
HarmonicExpansion grid_transform(const CubatureGrid& grid, const Eigen::VectorXd& values, int degree);

/// L^p norm of grid values by the grid's quadrature; p = inf is the max over
/// nodes. Throws DomainError for p < 1.
double lp_norm(const CubatureGrid& grid, const Eigen::VectorXd& values, double p);

/// floor(B^e) and ceil(B^e) with a small tolerance so exact powers of
/// integer B are not perturbed by rounding.
int floor_power(double B, int e);
int ceil_power(double B, int e);

}  // namespace sphvar
