#include "sphvar/errors.hpp"
#include "sphvar/estimators.hpp"
#include "sphvar/rates.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

namespace sphvar {
namespace {

std::shared_ptr<const NeedletFrame> frame5() {
  static const auto f = std::make_shared<const NeedletFrame>(2.0, 5);
  return f;
}

double y10(const Direction& x) { return real_sph_harm({1, 0}, x); }
double y20(const Direction& x) { return real_sph_harm({2, 0}, x); }

Dataset simulate(std::size_t n, std::uint64_t seed, const PointFunction& g, const PointFunction& sigma) {
  RandomStream rng(seed);
  Dataset d(n);
  for (auto& s : d) {
    s.X = sample_uniform(rng);
    s.Y = g(s.X) + sigma(s.X) * rng.normal();
  }
  return d;
}

PointFunction constant(double c) {
  return [c](const Direction&) { return c; };
}

double l2_risk(const FunctionEstimate& est, const PointFunction& truth) {
  const CubatureGrid& grid = est.frame().finest_grid();
  Eigen::VectorXd diff = est.on_grid(grid);
  for (int i = 0; i < grid.size(); ++i) diff[i] -= truth(grid.nodes[i]);
  return lp_norm(grid, diff, 2.0);
}

struct Moments {
  double mean = 0.0, m2 = 0.0;
  int n = 0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double se() const { return std::sqrt(m2 / (n - 1) / n); }
};

TEST(Tuning, TauN) {
  EXPECT_NEAR(tau_N(8), 0.50983, 1e-5);
  EXPECT_NEAR(tau_N(2), 0.58870, 1e-5);
  double prev = tau_N(10);
  for (std::size_t n = 11; n <= 1000000; n = n * 11 / 10 + 1) {
    const double t = tau_N(n);
    EXPECT_LT(t, prev);
    prev = t;
  }
  EXPECT_THROW(tau_N(1), ParameterError);
}

TEST(Tuning, JmaxRule) {
  EXPECT_EQ(jmax_rule(4096, 2.0), 4);
  EXPECT_EQ(jmax_rule(8, 2.0), 1);
  int prev = 1;
  for (std::size_t n = 8; n < 5000000; n = n * 3 / 2) {
    const int J = jmax_rule(n, 2.0);
    EXPECT_GE(J, prev);
    prev = J;
  }
  EXPECT_THROW(jmax_rule(7, 2.0), ParameterError);
  EXPECT_THROW(jmax_rule(100, 1.0), ParameterError);
}

TEST(EmpiricalCoeffs, ZeroResponses) {
  const Dataset d = simulate(300, 1, constant(0.0), constant(0.0));
  const CoefficientPyramid g = empirical_mean_coeffs(d, *frame5(), 3);
  const CoefficientPyramid h = empirical_h_coeffs(d, *frame5(), 3);
  EXPECT_EQ(g.energy(), 0.0);
  EXPECT_EQ(h.energy(), 0.0);
  EXPECT_THROW(empirical_mean_coeffs({}, *frame5(), 3), DataError);
  EXPECT_THROW(empirical_mean_coeffs(d, *frame5(), 7), ParameterError);
}

TEST(EmpiricalCoeffs, MatchDirectSums) {
  const auto& f = *frame5();
  const Dataset d = simulate(150, 2, [](const Direction& x) { return 1.0 + x.x() * x.y(); }, constant(0.3));
  const int J = 3;
  const CoefficientPyramid g = empirical_mean_coeffs(d, f, J);
  const CoefficientPyramid h = empirical_h_coeffs(d, f, J);
  const double n = static_cast<double>(d.size());
  double s0 = 0.0;
  for (const auto& s : d) s0 += s.Y;
  EXPECT_NEAR(g.scaling, kFourPi / n * s0 / std::sqrt(kFourPi), 1e-12);
  for (int j = 0; j <= f.j_max(); ++j) {
    for (int k = 0; k < f.K(j); k += 7) {
      double sg = 0.0, sh = 0.0;
      for (const auto& s : d) {
        const double psi = evaluate_needlet(f, j, k, s.X);
        sg += s.Y * psi;
        sh += s.Y * s.Y * psi;
      }
      const double eg = j < J ? kFourPi / n * sg : 0.0;
      const double eh = j < J ? kFourPi / n * sh : 0.0;
      EXPECT_NEAR(g.bands[j][k], eg, 1e-11) << j << "," << k;
      EXPECT_NEAR(h.bands[j][k], eh, 1e-11) << j << "," << k;
    }
  }
}

TEST(EmpiricalCoeffs, ConstantResponseHasCentredBands) {
  const auto& f = *frame5();
  const int J = 2;
  std::vector<std::vector<Moments>> m(J);
  for (int j = 0; j < J; ++j) m[j].resize(f.K(j));
  for (int rep = 0; rep < 500; ++rep) {
    const Dataset d = simulate(256, derive_seed(10, rep), constant(2.5), constant(0.0));
    const CoefficientPyramid c = empirical_mean_coeffs(d, f, J);
    for (int j = 0; j < J; ++j)
      for (int k = 0; k < f.K(j); ++k) m[j][k].add(c.bands[j][k]);
  }
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < f.K(j); ++k) EXPECT_LE(std::abs(m[j][k].mean), 4.0 * m[j][k].se()) << j << "," << k;
}

TEST(EmpiricalCoeffs, NoiselessMeanConverges) {
  const auto& f = *frame5();
  const PointFunction g = [](const Direction& x) { return real_sph_harm({3, 1}, x); };
  const std::size_t N = 100000;
  const Dataset d = simulate(N, 3, g, constant(0.0));
  const int J = jmax_rule(N, 2.0);
  const CoefficientPyramid est = empirical_mean_coeffs(d, f, J);
  const CoefficientPyramid truth = analyze(f, g);
  double gmax = 0.0;
  for (const auto& x : f.finest_grid().nodes) gmax = std::max(gmax, std::abs(g(x)));
  for (int j = 0; j < J; ++j) {
    // ||psi_jk||_2^2 = lambda_jk ||F_j||_2^2.
    const double profile_sq = std::pow(needlet_norm(f, j, 0, 2.0), 2) / f.grid(j).weights[0];
    for (int k = 0; k < f.K(j); ++k) {
      const double C = kFourPi * gmax * gmax * f.grid(j).weights[k] * profile_sq;
      EXPECT_LE(std::abs(est.bands[j][k] - truth.bands[j][k]), 4.0 * std::sqrt(C / N)) << j << "," << k;
    }
  }
}

TEST(EmpiricalCoeffs, UnitVarianceScaling) {
  const std::size_t N = 100000;
  const Dataset d = simulate(N, 4, constant(0.0), constant(1.0));
  const CoefficientPyramid h = empirical_h_coeffs(d, *frame5(), jmax_rule(N, 2.0));
  // Var(4 pi Y^2 Y_00) = 4 pi Var(Y^2) = 8 pi for standard normal Y.
  EXPECT_NEAR(h.scaling, std::sqrt(kFourPi), 4.0 * std::sqrt(8.0 * kPi / N));
}

TEST(EmpiricalCoeffs, HUnbiasedForTestPair) {
  const auto& f = *frame5();
  const PointFunction g = [](const Direction& x) { return 1.0 + 0.5 * y10(x); };
  const PointFunction sigma = [](const Direction& x) { return std::sqrt(1.0 + 0.25 * y20(x)); };
  const CoefficientPyramid truth = analyze(f, [&](const Direction& x) { return g(x) * g(x) + sigma(x) * sigma(x); });
  const int J = 2;
  std::vector<std::vector<Moments>> m(J);
  Moments m0;
  for (int j = 0; j < J; ++j) m[j].resize(f.K(j));
  for (int rep = 0; rep < 300; ++rep) {
    const CoefficientPyramid c = empirical_h_coeffs(simulate(1024, derive_seed(20, rep), g, sigma), f, J);
    m0.add(c.scaling);
    for (int j = 0; j < J; ++j)
      for (int k = 0; k < f.K(j); ++k) m[j][k].add(c.bands[j][k]);
  }
  EXPECT_LE(std::abs(m0.mean - truth.scaling), 4.0 * m0.se());
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < f.K(j); ++k)
      EXPECT_LE(std::abs(m[j][k].mean - truth.bands[j][k]), 4.0 * m[j][k].se()) << j << "," << k;
}

TEST(EmpiricalCoeffs, ScaleEquivariance) {
  const auto& f = *frame5();
  Dataset d = simulate(500, 5, y10, constant(0.5));
  const CoefficientPyramid g = empirical_mean_coeffs(d, f, 3);
  const CoefficientPyramid h = empirical_h_coeffs(d, f, 3);
  for (auto& s : d) s.Y *= 2.0;
  const CoefficientPyramid g2 = empirical_mean_coeffs(d, f, 3);
  const CoefficientPyramid h2 = empirical_h_coeffs(d, f, 3);
  EXPECT_EQ(g2.scaling, 2.0 * g.scaling);
  EXPECT_EQ(h2.scaling, 4.0 * h.scaling);
  for (int j = 0; j <= f.j_max(); ++j) {
    EXPECT_EQ(g2.bands[j], (2.0 * g.bands[j]).eval());
    EXPECT_EQ(h2.bands[j], (4.0 * h.bands[j]).eval());
  }
}

TEST(HardThreshold, Rule) {
  const auto& f = *frame5();
  const std::size_t N = 1000;
  const double kappa = 1.7;
  const double level = kappa * tau_N(N);
  CoefficientPyramid c = CoefficientPyramid::zeros(f);
  c.scaling = 1e-9;
  c.bands[1][0] = level;
  c.bands[1][1] = -level;
  c.bands[1][2] = std::nextafter(level, 0.0);
  c.bands[2][3] = 10.0;
  const CoefficientPyramid t = hard_threshold(c, kappa, N);
  EXPECT_EQ(t.scaling, 1e-9);
  EXPECT_EQ(t.bands[1][0], level);
  EXPECT_EQ(t.bands[1][1], -level);
  EXPECT_EQ(t.bands[1][2], 0.0);
  EXPECT_EQ(t.bands[2][3], 10.0);
  EXPECT_EQ(t.bands[0].squaredNorm(), 0.0);
  EXPECT_TRUE(hard_threshold(t, kappa, N) == t);

  const CoefficientPyramid all = hard_threshold(c, 1e300, N);
  for (const auto& b : all.bands) EXPECT_TRUE(b.isZero(0.0));
  EXPECT_EQ(all.scaling, c.scaling);
  EXPECT_THROW(hard_threshold(c, 0.0, N), ParameterError);
}

TEST(HardThreshold, IdempotentOnData) {
  const auto& f = *frame5();
  const Dataset d = simulate(2000, 6, y10, constant(1.0));
  const CoefficientPyramid once = hard_threshold(empirical_h_coeffs(d, f, 4), 1.0, d.size());
  EXPECT_TRUE(hard_threshold(once, 1.0, d.size()) == once);
}

TEST(SplitSample, EvenOdd) {
  Dataset d(5);
  for (int i = 0; i < 5; ++i) d[i].Y = i;
  auto [a, b] = split_sample(d);
  ASSERT_EQ(a.size(), 3u);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(a[0].Y, 0);
  EXPECT_EQ(a[1].Y, 2);
  EXPECT_EQ(a[2].Y, 4);
  EXPECT_EQ(b[0].Y, 1);
  EXPECT_EQ(b[1].Y, 3);
  d.pop_back();
  auto [c, e] = split_sample(d);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(e.size(), 2u);
}

TEST(EstimateMean, ZeroAndDeterminism) {
  const auto f = frame5();
  const EstimatorConfig cfg;
  const FunctionEstimate zero = estimate_mean(simulate(1000, 7, constant(0.0), constant(0.0)), f, cfg);
  EXPECT_TRUE(zero.on_grid(f->finest_grid()).isZero(0.0));
  const Dataset d = simulate(1000, 8, y10, constant(0.2));
  const Eigen::VectorXd a = estimate_mean(d, f, cfg).on_grid(f->finest_grid());
  const Eigen::VectorXd b = estimate_mean(d, f, cfg).on_grid(f->finest_grid());
  EXPECT_EQ(a, b);
  EXPECT_EQ(estimate_mean(d, f, cfg).top_scale(), jmax_rule(1000, 2.0) - 1);
}

TEST(EstimateMean, RiskFallsWithN) {
  const auto f = frame5();
  const PointFunction g = [](const Direction& x) { return 1.0 + y10(x); };
  double small = 0.0, large = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    small += l2_risk(estimate_mean(simulate(1 << 10, derive_seed(30, rep), g, constant(0.1)), f, {}), g);
    large += l2_risk(estimate_mean(simulate(1 << 14, derive_seed(31, rep), g, constant(0.1)), f, {}), g);
  }
  EXPECT_LE(large, small);
}

TEST(EstimateGsquared, ZeroConstantAndSymmetry) {
  const auto f = frame5();
  const EstimatorConfig cfg;
  EXPECT_TRUE(estimate_gsquared(simulate(512, 9, constant(0.0), constant(0.0)), f, cfg).on_grid(f->grid(3)).isZero(0.0));

  const std::vector<Direction> probes = sample_uniform(10, 77);
  std::vector<Moments> m(probes.size());
  for (int rep = 0; rep < 50; ++rep) {
    const FunctionEstimate sq = estimate_gsquared(simulate(4096, derive_seed(40, rep), constant(2.0), constant(0.05)), f, cfg);
    const Eigen::VectorXd v = sq.evaluate(probes);
    for (std::size_t i = 0; i < probes.size(); ++i) m[i].add(v[static_cast<Eigen::Index>(i)]);
  }
  for (const auto& mi : m) EXPECT_LE(std::abs(mi.mean - 4.0), 4.0 * mi.se() + 1e-12);

  // Swapping the halves gives the same product.
  const Dataset d = simulate(2000, 11, y10, constant(0.5));
  auto [d1, d2] = split_sample(d);
  const int J = jmax_rule(1000, 2.0);
  const FunctionEstimate g1(f, hard_threshold(empirical_mean_coeffs(d1, *f, J), 1.0, 1000), J - 1);
  const FunctionEstimate g2(f, hard_threshold(empirical_mean_coeffs(d2, *f, J), 1.0, 1000), J - 1);
  const int top = jmax_rule(2000, 2.0) - 1;
  const Eigen::VectorXd ab = FunctionEstimate::product(g1, g2, top).on_grid(f->finest_grid());
  const Eigen::VectorXd ba = FunctionEstimate::product(g2, g1, top).on_grid(f->finest_grid());
  EXPECT_EQ(ab, ba);
  const Eigen::VectorXd built = estimate_gsquared(d, f, cfg).on_grid(f->finest_grid());
  EXPECT_LE((built - ab).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EstimateGsquared, CoefficientsAreTruncated) {
  const auto f = frame5();
  const FunctionEstimate sq = estimate_gsquared(simulate(600, 12, y10, constant(0.3)), f, {});
  const CoefficientPyramid c = sq.coefficients();
  for (int j = sq.top_scale() + 1; j <= f->j_max(); ++j) EXPECT_TRUE(c.bands[j].isZero(0.0));
}

TEST(EstimateVariance, ZeroAndUnitVariance) {
  const auto f = frame5();
  const EstimatorConfig cfg;
  EXPECT_TRUE(estimate_variance(simulate(512, 13, constant(0.0), constant(0.0)), f, cfg).on_grid(f->finest_grid()).isZero(0.0));

  const std::vector<Direction> probes = sample_uniform(100, 78);
  double mean = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    mean += estimate_variance(simulate(1 << 14, derive_seed(50, rep), constant(0.0), constant(1.0)), f, cfg).evaluate(probes).mean();
  }
  mean /= 20.0;
  EXPECT_GE(mean, 0.9);
  EXPECT_LE(mean, 1.1);
}

TEST(EstimateVarianceKnownMean, ZeroMeanIsThresholdedH) {
  const auto f = frame5();
  const EstimatorConfig cfg;
  const Dataset d = simulate(3000, 14, constant(0.0), constant(1.3));
  const FunctionEstimate km = estimate_variance_known_mean(d, constant(0.0), f, cfg);
  const int J = jmax_rule(d.size(), 2.0);
  EXPECT_TRUE(km.coefficients() == hard_threshold(empirical_h_coeffs(d, *f, J), 1.0, d.size()));
}

TEST(EstimateVarianceKnownMean, ScalingUnbiased) {
  const auto f = frame5();
  Moments m;
  for (int rep = 0; rep < 200; ++rep) {
    m.add(estimate_variance_known_mean(simulate(1024, derive_seed(70, rep), y10, constant(1.0)), y10, f, {}).coefficients().scaling);
  }
  EXPECT_LE(std::abs(m.mean - std::sqrt(kFourPi)), 4.0 * m.se());
}

TEST(EstimatorConfig, Validation) {
  EstimatorConfig c;
  EXPECT_NO_THROW(c.validate());
  c.kappa_h = 0.0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = {};
  c.J_override = 0;
  EXPECT_THROW(c.validate(), ParameterError);
  c.J_override = 3;
  EXPECT_EQ(resolution_level(1 << 20, c), 3);
}

TEST(Rates, ClosedForms) {
  EXPECT_DOUBLE_EQ(rate_regular(2.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(rate_sparse(3.0, 1.0, kInfinity), 0.25);
  EXPECT_DOUBLE_EQ(sparse_threshold(2.0, 3.0), 9.0);
}

TEST(Rates, ContinuityAtSparseThreshold) {
  RandomStream rng(90);
  for (int i = 0; i < 100; ++i) {
    const double r = rng.uniform(1.0, 8.0);
    const double s = rng.uniform(2.0 / r + 0.01, 6.0);
    const double T = sparse_threshold(s, r);
    EXPECT_NEAR(rate_sparse(s, r, T), rate_regular(s), 1e-12);
  }
}

TEST(Rates, RegimeSelection) {
  // alpha = 3, beta = 2, rho = 2, mu = 1.5: T_g = 8, T(beta, mu) = 4.5,
  // T(beta, rho) = 6, p0 = 8 / (1 + 4/3) = 24/7.
  auto r = rate_exponent(1, 3, 2, 2, 1.5, 8.0);
  EXPECT_EQ(r.regime, Regime::regular);
  EXPECT_DOUBLE_EQ(r.R, rate_regular(3));
  r = rate_exponent(1, 3, 2, 2, 1.5, 8.5);
  EXPECT_EQ(r.regime, Regime::sparse);
  EXPECT_DOUBLE_EQ(r.R, rate_sparse(3, 2, 8.5));

  r = rate_exponent(2, 3, 2, 2, 1.5, 4.5);
  EXPECT_EQ(r.regime, Regime::regular);
  EXPECT_DOUBLE_EQ(r.R, rate_regular(2));
  ASSERT_TRUE(r.p0.has_value());
  EXPECT_DOUBLE_EQ(*r.p0, 24.0 / 7.0);
  r = rate_exponent(2, 3, 2, 2, 1.5, 5.0);
  EXPECT_EQ(r.regime, Regime::sparse);
  EXPECT_DOUBLE_EQ(r.R, rate_sparse(2, 1.5, 5.0));
  EXPECT_FALSE(r.non_optimal);

  r = rate_exponent(3, 3, 2, 2, 1.5, 6.0);
  EXPECT_EQ(r.regime, Regime::regular);
  EXPECT_DOUBLE_EQ(r.T_h, 6.0);
  r = rate_exponent(3, 3, 2, 2, 1.5, 6.5);
  EXPECT_EQ(r.regime, Regime::sparse);
  EXPECT_DOUBLE_EQ(r.R, rate_sparse(2, 2, 6.5));

  r = rate_exponent(4, 3, 2, 2, 1.5, 4.5);
  EXPECT_EQ(r.regime, Regime::regular);
  r = rate_exponent(4, 3, 2, 2, 1.5, kInfinity);
  EXPECT_EQ(r.regime, Regime::sparse);
  EXPECT_DOUBLE_EQ(r.R, rate_sparse(2, 1.5, kInfinity));
  EXPECT_DOUBLE_EQ(r.R_min, std::min(rate_regular(2), rate_sparse(2, 1.5, kInfinity)));
}

TEST(Rates, Case2WindowEmptyWhenBetaAboveTwoOverMu) {
  // p0 > T(beta, mu) reduces to mu (beta + 1) < 2, i.e. beta < 2/mu - 1.
  RandomStream rng(91);
  for (int i = 0; i < 200; ++i) {
    const double mu = rng.uniform(1.0, 6.0);
    const double beta = rng.uniform(2.0 / mu + 1e-3, 5.0);
    const double alpha = beta + rng.uniform(0.0, 4.0);
    const auto r = rate_exponent(2, alpha, beta, mu, mu, 2.0);
    EXPECT_LE(*r.p0, r.T_h + 1e-12);
  }
}

TEST(Rates, Errors) {
  EXPECT_THROW(rate_exponent(0, 2, 2, 2, 2, 2), ParameterError);
  EXPECT_THROW(rate_exponent(1, 0.5, 2, 2, 2, 2), ParameterError);
  EXPECT_THROW(rate_exponent(4, 2, 1.0, 2, 1.5, 2), ParameterError);
  EXPECT_THROW(rate_exponent(1, 2, 2, 2, 2, 0.5), ParameterError);
}

}  // namespace
}  // namespace sphvar
