#pragma once

#include "sphvar/frame.hpp"

#include <cstdint>

namespace sphvar {

/// Besov ball B^s_{r,q}(R). r and q may be kInfinity.
struct BesovParams {
  double s = 2.0;
  double r = 2.0;
  double q = 2.0;
  double R = 1.0;

  /// Throws ParameterError unless r, q in [1, inf], R > 0 and s > 2/r.
  void validate() const;
};

/// Coefficient part of the Besov norm,
///   [ sum_j B^{j q (s + 1 - 2/r)} (sum_k |f_jk|^r)^{q/r} ]^{1/q},
/// with max conventions at r = inf or q = inf. The scaling band enters as an
/// extra j = 0 block (weight 1). The L^r part of the full norm is omitted.
/// Throws DataError on non-finite coefficients.
double besov_seminorm(const CoefficientPyramid& coeffs, const BesovParams& params, double B);

/// Random pyramid with besov_seminorm == params.R.
///
/// Per scale, a random subset of ceil(sparsity K_j) locations gets random
/// signs and amplitudes, rescaled so that
///   sum_k (|f_jk| ||psi_jk||_r)^r = (B^{-js} w_j)^r,  w_j = (j+1)^{-(1+1/q)};
/// finally the whole pyramid is scaled to seminorm R. The scaling
/// coefficient is zero. Deterministic in `seed`.
CoefficientPyramid sample_besov_ball(const BesovParams& params, const NeedletFrame& frame, std::uint64_t seed,
                                     double sparsity = 1.0);

/// ||sum_{j >= J} sum_k f_jk psi_jk||_p on the finest grid (scaling band
/// excluded). Zero when J > j_max.
double jackson_tail(const NeedletFrame& frame, const CoefficientPyramid& coeffs, int J, double p);

}  // namespace sphvar
