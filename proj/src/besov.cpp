#include "sphvar/besov.hpp"

#include "sphvar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace sphvar {
namespace {

double block_norm(const Eigen::VectorXd& v, double r) {
  if (v.size() == 0) return 0.0;
  if (std::isinf(r)) return v.cwiseAbs().maxCoeff();
  return std::pow(v.cwiseAbs().array().pow(r).sum(), 1.0 / r);
}

}  // namespace

void BesovParams::validate() const {
  if (!(r >= 1.0) || !(q >= 1.0)) throw ParameterError("BesovParams: r and q must lie in [1, inf]");
  if (!(R > 0.0)) throw ParameterError("BesovParams: radius must be positive");
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  if (!(s > 2.0 * inv_r)) throw ParameterError("BesovParams: need s > 2/r");
}

double besov_seminorm(const CoefficientPyramid& coeffs, const BesovParams& params, double B) {
  if (!std::isfinite(coeffs.scaling)) throw DataError("besov_seminorm: non-finite scaling coefficient");
  for (const auto& b : coeffs.bands) {
    if (!b.allFinite()) throw DataError("besov_seminorm: non-finite coefficient");
  }
  const double inv_r = std::isinf(params.r) ? 0.0 : 1.0 / params.r;
  const double exponent = params.s + 1.0 - 2.0 * inv_r;

  std::vector<double> terms;
  terms.push_back(std::abs(coeffs.scaling));
  for (int j = 0; j < coeffs.num_bands(); ++j) terms.push_back(std::pow(B, j * exponent) * block_norm(coeffs.bands[j], params.r));

  if (std::isinf(params.q)) return *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::pow(t, params.q);
  return std::pow(sum, 1.0 / params.q);
}

CoefficientPyramid sample_besov_ball(const BesovParams& params, const NeedletFrame& frame, std::uint64_t seed,
                                     double sparsity) {
  params.validate();
  if (!(sparsity > 0.0 && sparsity <= 1.0)) throw ParameterError("sample_besov_ball: sparsity must lie in (0, 1]");
  RandomStream rng(seed);
  CoefficientPyramid c = CoefficientPyramid::zeros(frame);
  const double inv_q = std::isinf(params.q) ? 0.0 : 1.0 / params.q;

  for (int j = 0; j <= frame.j_max(); ++j) {
    const int K = frame.K(j);
    const int active = std::clamp(static_cast<int>(std::ceil(sparsity * K - 1e-9)), 1, K);
    if (active < 1) throw ParameterError("sample_besov_ball: empty scale");
    std::vector<int> idx(K);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng.engine());

    const double psi_norm = needlet_norm(frame, j, 0, params.r) / std::sqrt(frame.grid(j).weights[0]);
    Eigen::VectorXd weighted = Eigen::VectorXd::Zero(K);  // |f_jk| ||psi_jk||_r
    for (int a = 0; a < active; ++a) {
      const int k = idx[a];
      const double amp = 1.0 - rng.uniform(0.0, 1.0);  // (0, 1]
      c.bands[j][k] = rng.coin() ? amp : -amp;
      weighted[k] = amp * std::sqrt(frame.grid(j).weights[k]) * psi_norm;
    }
    const double target = std::pow(frame.B(), -j * params.s) * std::pow(j + 1.0, -(1.0 + inv_q));
    c.bands[j] *= target / block_norm(weighted, params.r);
  }
  c.scaling = 0.0;
  const double current = besov_seminorm(c, params, frame.B());
  for (auto& b : c.bands) b *= params.R / current;
  return c;
}

double jackson_tail(const NeedletFrame& frame, const CoefficientPyramid& coeffs, int J, double p) {
  coeffs.check_shape(frame);
  if (J < 0) throw ParameterError("jackson_tail: cut scale must be >= 0");
  if (J > frame.j_max()) return 0.0;
  CoefficientPyramid tail = CoefficientPyramid::zeros(frame);
  for (int j = J; j <= frame.j_max(); ++j) tail.bands[j] = coeffs.bands[j];
  return lp_norm(frame.finest_grid(), synthesize_on_finest_grid(frame, tail), p);
}

}  // namespace sphvar
