#pragma once

#include "sphvar/errors.hpp"
#include "sphvar/sphere.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>
#include <vector>

// Real spherical harmonics, orthonormal for the surface measure of total mass
// 4 pi:
//
//   Y_lm = sqrt(2) N_l|m| P_l|m|(cos theta) sin(|m| phi)   m < 0
//   Y_l0 =         N_l0   P_l (cos theta)                  m = 0
//   Y_lm = sqrt(2) N_lm   P_lm (cos theta) cos(m phi)      m > 0
//
// with N_lm = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!). The Condon-Shortley phase is
// NOT applied: P_mm > 0 on (-1, 1). Switching conventions flips the sign of
// odd-m coefficients only; norms and all risks are unchanged.

namespace sphvar {

struct HarmonicIndex {
  int l = 0;
  int m = 0;
};

/// Position of Y_lm in a packed real-harmonic vector of any degree >= l.
constexpr int harmonic_offset(int l, int m) { return l * l + l + m; }
constexpr int harmonic_count(int degree) { return (degree + 1) * (degree + 1); }
/// Position of P_lm (m >= 0) in a packed triangular Legendre table.
constexpr int legendre_offset(int l, int m) { return l * (l + 1) / 2 + m; }

/// Fully normalized associated Legendre value N_lm P_lm(x) (no Condon-Shortley
/// phase), by the three-term recurrence in l seeded from the diagonal.
///
/// Normalization is folded into the recurrence so no factorial is ever formed;
/// stable to l = 2048 and beyond in double precision.
template <class Scalar>
Scalar assoc_legendre_normalized(int l, int m, Scalar x) {
  using std::abs;
  using std::sqrt;
  if (m < 0 || m > l) throw IndexError("assoc_legendre_normalized: need 0 <= m <= l");
  if (abs(x) > Scalar(1)) throw DomainError("assoc_legendre_normalized: |x| > 1");

  const Scalar pi = Scalar(3.14159265358979323846264338327950288419716939937510L);
  const Scalar s = sqrt((Scalar(1) - x) * (Scalar(1) + x));
  Scalar pmm = Scalar(1) / sqrt(Scalar(4) * pi);
  for (int i = 1; i <= m; ++i) pmm *= sqrt(Scalar(2 * i + 1) / Scalar(2 * i)) * s;
  if (l == m) return pmm;

  Scalar p_prev = pmm;
  Scalar p_curr = sqrt(Scalar(2 * m + 3)) * x * pmm;
  for (int ll = m + 2; ll <= l; ++ll) {
    const Scalar a = sqrt(Scalar(4 * ll * ll - 1) / Scalar(ll * ll - m * m));
    const Scalar b = sqrt(Scalar((ll - 1) * (ll - 1) - m * m) / Scalar(4 * (ll - 1) * (ll - 1) - 1));
    const Scalar next = a * (x * p_curr - b * p_prev);
    p_prev = p_curr;
    p_curr = next;
  }
  return p_curr;
}

/// Legendre polynomial P_l(x) by Bonnet's recurrence.
template <class Scalar>
Scalar legendre_polynomial(int l, Scalar x) {
  if (l < 0) throw IndexError("legendre_polynomial: negative degree");
  if (l == 0) return Scalar(1);
  Scalar p0 = Scalar(1), p1 = x;
  for (int k = 2; k <= l; ++k) {
    const Scalar p2 = (Scalar(2 * k - 1) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Real spherical harmonic Y_lm at a point. Throws IndexError if |m| > l.
double real_sph_harm(HarmonicIndex idx, const Direction& p);

/// Precomputed recurrence coefficients for all P_lm with l <= degree; fills
/// whole triangular tables in O(degree^2).
class LegendreTable {
 public:
  explicit LegendreTable(int degree);

  int degree() const { return degree_; }
  int size() const { return legendre_offset(degree_, degree_) + 1; }

  /// Writes N_lm P_lm(x) at legendre_offset(l, m) for 0 <= m <= l <= degree.
  void evaluate(double x, std::span<double> out) const;

 private:
  int degree_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> diag_;
};

/// All real harmonics of degree <= L at one point, packed by harmonic_offset.
/// Uses a cos/sin recurrence in m so only one sin/cos pair is evaluated.
class HarmonicTable {
 public:
  explicit HarmonicTable(int degree) : legendre_(degree), scratch_(legendre_.size()) {}

  int degree() const { return legendre_.degree(); }
  int size() const { return harmonic_count(degree()); }

  void evaluate(const Direction& p, Eigen::Ref<Eigen::VectorXd> out);

 private:
  LegendreTable legendre_;
  std::vector<double> scratch_;
};

/// f = sum_{l <= degree} sum_m coeffs[harmonic_offset(l, m)] Y_lm.
struct HarmonicExpansion {
  int degree = 0;
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(1);

  HarmonicExpansion() = default;
  HarmonicExpansion(int deg, Eigen::VectorXd c);
  static HarmonicExpansion zero(int deg) { return {deg, Eigen::VectorXd::Zero(harmonic_count(deg))}; }

  double coefficient(int l, int m) const;
  double evaluate(const Direction& p) const;
  Eigen::VectorXd evaluate(std::span<const Direction> points) const;

  /// L2 norm, by Parseval.
  double l2_norm() const { return coeffs.norm(); }

  /// Copy with degree raised or lowered (coefficients above `deg` dropped).
  HarmonicExpansion resized(int deg) const;
};

HarmonicExpansion operator+(const HarmonicExpansion& a, const HarmonicExpansion& b);
HarmonicExpansion operator*(double s, const HarmonicExpansion& a);

}  // namespace sphvar
