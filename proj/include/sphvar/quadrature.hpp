#pragma once

#include <vector>

namespace sphvar {

/// Gauss-Legendre rule on [-1, 1]: exact for polynomials of degree <= 2n - 1.
struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // positive, sum to 2
};

/// n-point rule by Newton iteration on P_n from Chebyshev-like initial guesses.
GaussLegendreRule gauss_legendre(int n);

}  // namespace sphvar
