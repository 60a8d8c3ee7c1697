#pragma once

#include <optional>
#include <string>

namespace sphvar {

enum class Regime { regular, sparse };

std::string to_string(Regime r);

/// L^p-risk exponents of the variance estimator: E||V - V_hat||_p^p is of
/// order (N / ln N)^{-p R}.
struct RateExponents {
  Regime regime = Regime::regular;
  double R = 0.0;
  double T_h = 0.0;
  double T_g = 0.0;
  std::optional<double> p0;  // Case 2 only
  bool non_optimal = false;  // Case 2, T_h < p <= p0
  double R_min = 0.0;        // minimax lower-bound exponent
};

/// s / (2(s+1)).
double rate_regular(double s);
/// (s - 2(1/r - 1/p)) / (2(s - 2(1/r - 1/2))); r, p may be infinite.
double rate_sparse(double s, double r, double p);
/// r (s + 1).
double sparse_threshold(double s, double r);

/// Exponent for g in B^alpha_{rho,.} and, by case, h in
///   1: B^alpha_rho   2: B^beta_mu (beta < alpha)   3: B^beta_rho   4: B^beta_mu.
/// Throws ParameterError outside the parameter domain (s > 2/r for the pairs
/// in use, p >= 1, case in 1..4).
RateExponents rate_exponent(int case_id, double alpha, double beta, double rho, double mu, double p);

}  // namespace sphvar
