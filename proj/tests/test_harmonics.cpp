#include "sphvar/cubature.hpp"
#include "sphvar/harmonics.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include <cmath>

namespace sphvar {
namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

// Independent oracle: N_lm (1 - x^2)^{m/2} d^m/dx^m P_l(x) from the explicit
// monomial expansion of P_l, in 50-digit arithmetic.
Big legendre_oracle(int l, int m, const Big& x) {
  using boost::multiprecision::pow;
  using boost::multiprecision::sqrt;
  auto binom = [](int n, int k) {
    Big r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  Big sum = 0;
  for (int k = 0; k <= l / 2; ++k) {
    const int e = l - 2 * k;
    if (e < m) continue;
    Big c = binom(l, k) * binom(2 * l - 2 * k, l) / pow(Big(2), l);
    if (k % 2) c = -c;
    Big falling = 1;
    for (int i = 0; i < m; ++i) falling *= (e - i);
    sum += c * falling * pow(x, e - m);
  }
  Big ratio = 1;  // (l-m)!/(l+m)!
  for (int i = l - m + 1; i <= l + m; ++i) ratio /= i;
  const Big pi = boost::math::constants::pi<Big>();
  const Big norm = sqrt(Big(2 * l + 1) / (4 * pi) * ratio);
  return norm * pow(1 - x * x, Big(m) / 2) * sum;
}

TEST(AssocLegendre, ClosedForms) {
  EXPECT_NEAR(assoc_legendre_normalized(0, 0, 0.3), 0.28209479177387814, 1e-15);
  for (double x : {-1.0, -0.4, 0.0, 0.77, 1.0}) {
    EXPECT_NEAR(assoc_legendre_normalized(1, 0, x), std::sqrt(3.0 / kFourPi) * x, 1e-15);
  }
}

TEST(AssocLegendre, MatchesHighPrecisionOracle) {
  // Frozen from the oracle: -0.29893871354588817923 at (50, 25, 0.4).
  const double frozen = -0.2989387135458881792298073;
  const double v = assoc_legendre_normalized(50, 25, 0.4);
  EXPECT_NEAR(v / frozen, 1.0, 1e-10);
  const double oracle = static_cast<double>(legendre_oracle(50, 25, Big("0.4")));
  EXPECT_NEAR(oracle / frozen, 1.0, 1e-15);

  for (auto [l, m, x] : {std::tuple{12, 3, -0.91}, {30, 0, 0.123}, {40, 40, 0.5}, {64, 7, 0.66}, {37, 20, -0.2}}) {
    const double ref = static_cast<double>(legendre_oracle(l, m, Big(x)));
    EXPECT_NEAR(assoc_legendre_normalized(l, m, x), ref, 1e-10 * std::max(1.0, std::abs(ref))) << l << "," << m;
  }
}

TEST(AssocLegendre, ExtendedPrecisionInstantiationAgrees) {
  const long double hi = assoc_legendre_normalized<long double>(300, 120, 0.25L);
  const double lo = assoc_legendre_normalized(300, 120, 0.25);
  EXPECT_NEAR(lo, static_cast<double>(hi), 1e-12 * std::abs(static_cast<double>(hi)) + 1e-300);
}

TEST(AssocLegendre, LargeDegreeStaysFinite) {
  for (int m : {0, 1, 700, 2048}) {
    const double v = assoc_legendre_normalized(2048, m, 0.3);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_LT(std::abs(v), 10.0);
  }
}

TEST(AssocLegendre, Errors) {
  EXPECT_THROW(assoc_legendre_normalized(3, 4, 0.1), IndexError);
  EXPECT_THROW(assoc_legendre_normalized(3, 1, 1.1), DomainError);
  EXPECT_THROW(real_sph_harm({2, -3}, Direction::north()), IndexError);
}

TEST(LegendreTable, MatchesScalarRecurrence) {
  LegendreTable t(40);
  std::vector<double> out(t.size());
  t.evaluate(-0.37, out);
  for (int l = 0; l <= 40; ++l) {
    for (int m = 0; m <= l; ++m) EXPECT_NEAR(out[legendre_offset(l, m)], assoc_legendre_normalized(l, m, -0.37), 1e-13);
  }
}

TEST(RealSphHarm, ClosedForms) {
  const Direction p = Direction::from_angles(0.8, 2.1);
  EXPECT_NEAR(real_sph_harm({0, 0}, p), 1.0 / std::sqrt(kFourPi), 1e-15);
  EXPECT_NEAR(real_sph_harm({1, 0}, p), std::sqrt(3.0 / kFourPi) * std::cos(0.8), 1e-15);
  // Y_{1,1} = sqrt(3/(4 pi)) sin(theta) cos(phi) without the Condon-Shortley sign.
  EXPECT_NEAR(real_sph_harm({1, 1}, p), std::sqrt(3.0 / kFourPi) * std::sin(0.8) * std::cos(2.1), 1e-15);
  EXPECT_NEAR(real_sph_harm({1, -1}, p), std::sqrt(3.0 / kFourPi) * std::sin(0.8) * std::sin(2.1), 1e-15);
}

TEST(RealSphHarm, TableAgreesWithPointwise) {
  HarmonicTable table(20);
  Eigen::VectorXd y(table.size());
  for (const auto& p : sample_uniform(20, 3)) {
    table.evaluate(p, y);
    for (int l = 0; l <= 20; ++l) {
      for (int m = -l; m <= l; ++m) EXPECT_NEAR(y[harmonic_offset(l, m)], real_sph_harm({l, m}, p), 1e-12);
    }
  }
  table.evaluate(Direction::north(), y);
  EXPECT_NEAR(y[harmonic_offset(3, 0)], std::sqrt(7.0 / kFourPi), 1e-14);
  EXPECT_EQ(y[harmonic_offset(3, 2)], 0.0);
}

TEST(RealSphHarm, AdditionTheorem) {
  HarmonicTable table(64);
  Eigen::VectorXd y(table.size());
  for (const auto& p : sample_uniform(25, 5)) {
    table.evaluate(p, y);
    for (int l = 0; l <= 64; ++l) {
      const double s = y.segment(l * l, 2 * l + 1).squaredNorm();
      EXPECT_NEAR(s, (2.0 * l + 1.0) / kFourPi, 1e-9);
    }
  }
}

TEST(RealSphHarm, Parity) {
  for (const auto& p : sample_uniform(10, 8)) {
    for (int l = 0; l <= 12; ++l) {
      for (int m = -l; m <= l; ++m) {
        const double sign = l % 2 ? -1.0 : 1.0;
        EXPECT_NEAR(real_sph_harm({l, m}, -p), sign * real_sph_harm({l, m}, p), 1e-10);
      }
    }
  }
}

TEST(RealSphHarm, OrthonormalOnExactGrid) {
  const int L = 32;
  const CubatureGrid g = make_product_grid(2 * L);
  HarmonicTable table(L);
  Eigen::MatrixXd Y(g.size(), harmonic_count(L));
  Eigen::VectorXd y(table.size());
  for (int k = 0; k < g.size(); ++k) {
    table.evaluate(g.nodes[k], y);
    Y.row(k) = y.transpose();
  }
  const Eigen::MatrixXd gram = Y.transpose() * g.weights.asDiagonal() * Y;
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-8);

  const CubatureGrid g6 = make_product_grid(6);
  double s11 = 0.0, s21 = 0.0;
  for (int k = 0; k < g6.size(); ++k) {
    const double a = real_sph_harm({2, 1}, g6.nodes[k]);
    s11 += g6.weights[k] * a * a;
    s21 += g6.weights[k] * a * real_sph_harm({3, 1}, g6.nodes[k]);
  }
  EXPECT_NEAR(s11, 1.0, 1e-10);
  EXPECT_NEAR(s21, 0.0, 1e-10);
}

TEST(SampleUniform, HarmonicMeansVanish) {
  const auto pts = sample_uniform(100000, 1);
  HarmonicTable table(3);
  Eigen::VectorXd y(table.size()), mean = Eigen::VectorXd::Zero(table.size()), sq = mean;
  for (const auto& p : pts) {
    table.evaluate(p, y);
    mean += y;
    sq += y.cwiseAbs2();
  }
  const double n = pts.size();
  for (int i = 1; i < table.size(); ++i) {
    const double m = mean[i] / n;
    const double se = std::sqrt((sq[i] / n - m * m) / n);
    EXPECT_LT(std::abs(m), 5.0 * se) << "harmonic " << i;
  }
}

TEST(HarmonicExpansion, EvaluateAndAlgebra) {
  HarmonicExpansion f = HarmonicExpansion::zero(3);
  f.coeffs[harmonic_offset(2, -1)] = 0.5;
  f.coeffs[0] = 2.0;
  const Direction p = Direction::from_angles(0.4, 1.3);
  EXPECT_NEAR(f.evaluate(p), 2.0 * real_sph_harm({0, 0}, p) + 0.5 * real_sph_harm({2, -1}, p), 1e-14);
  const HarmonicExpansion g = f + 2.0 * HarmonicExpansion::zero(5);
  EXPECT_EQ(g.degree, 5);
  EXPECT_NEAR(g.evaluate(p), f.evaluate(p), 1e-14);
  EXPECT_EQ(f.coefficient(9, 0), 0.0);
  EXPECT_THROW(HarmonicExpansion(2, Eigen::VectorXd::Zero(4)), ShapeError);
}

}  // namespace
}  // namespace sphvar
