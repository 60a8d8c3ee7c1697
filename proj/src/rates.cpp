#include "sphvar/rates.hpp"

#include "sphvar/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sphvar {
namespace {

double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

void check_pair(double s, double r, const char* what) {
  if (!(r >= 1.0)) throw ParameterError(std::string("rate_exponent: integrability of ") + what + " must be >= 1");
  if (!(s > 2.0 * inv(r))) throw ParameterError(std::string("rate_exponent: need s > 2/r for ") + what);
}

}  // namespace

std::string to_string(Regime r) { return r == Regime::regular ? "regular" : "sparse"; }

double rate_regular(double s) { return s / (2.0 * (s + 1.0)); }

double rate_sparse(double s, double r, double p) {
  return (s - 2.0 * (inv(r) - inv(p))) / (2.0 * (s - 2.0 * (inv(r) - 0.5)));
}

double sparse_threshold(double s, double r) { return std::isinf(r) ? r : r * (s + 1.0); }

RateExponents rate_exponent(int case_id, double alpha, double beta, double rho, double mu, double p) {
  if (case_id < 1 || case_id > 4) throw ParameterError("rate_exponent: case must be 1..4");
  if (!(p >= 1.0)) throw ParameterError("rate_exponent: p must be >= 1");
  check_pair(alpha, rho, "g");

  RateExponents out;
  out.T_g = sparse_threshold(alpha, rho);
  auto regular = [&](double s) {
    out.regime = Regime::regular;
    out.R = rate_regular(s);
  };
  auto sparse = [&](double s, double r) {
    out.regime = Regime::sparse;
    out.R = rate_sparse(s, r, p);
  };

  switch (case_id) {
    case 1:
      out.T_h = out.T_g;
      if (p <= out.T_g) regular(alpha);
      else sparse(alpha, rho);
      break;
    case 2: {
      check_pair(beta, mu, "h");
      out.T_h = sparse_threshold(beta, mu);
      const double denom = alpha - beta + 2.0 * inv(mu);
      if (!(denom > 0.0)) throw ParameterError("rate_exponent: p0 undefined (alpha - beta + 2/mu <= 0)");
      out.p0 = 2.0 * (alpha + 1.0) / denom;
      if (p <= out.T_h) {
        regular(beta);
      } else if (p <= *out.p0) {
        regular(alpha);
        out.non_optimal = true;
      } else {
        sparse(beta, mu);
      }
      break;
    }
    case 3:
      check_pair(beta, rho, "h");
      out.T_h = sparse_threshold(beta, rho);
      if (p <= out.T_h) regular(beta);
      else sparse(beta, rho);
      break;
    case 4:
      check_pair(beta, mu, "h");
      out.T_h = sparse_threshold(beta, mu);
      if (p <= out.T_h) regular(beta);
      else sparse(beta, mu);
      break;
  }

  const double s0 = std::min(alpha, beta);
  const double r0 = std::min(rho, mu);
  out.R_min = std::min(rate_regular(s0), rate_sparse(s0, r0, p));
  return out;
}

}  // namespace sphvar
