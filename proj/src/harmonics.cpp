#include "sphvar/harmonics.hpp"

#include <algorithm>

namespace sphvar {

double real_sph_harm(HarmonicIndex idx, const Direction& p) {
  if (idx.l < 0 || idx.m < -idx.l || idx.m > idx.l) {
    throw IndexError("real_sph_harm: invalid index (l=" + std::to_string(idx.l) + ", m=" + std::to_string(idx.m) + ")");
  }
  const int am = std::abs(idx.m);
  const double plm = assoc_legendre_normalized<double>(idx.l, am, std::clamp(p.z(), -1.0, 1.0));
  if (idx.m == 0) return plm;
  const double phi = p.phi();
  const double trig = idx.m > 0 ? std::cos(am * phi) : std::sin(am * phi);
  return std::sqrt(2.0) * plm * trig;
}

LegendreTable::LegendreTable(int degree) : degree_(degree) {
  if (degree < 0) throw ParameterError("LegendreTable: negative degree");
  const int n = legendre_offset(degree, degree) + 1;
  a_.assign(n, 0.0);
  b_.assign(n, 0.0);
  diag_.assign(degree + 1, 1.0);
  for (int m = 1; m <= degree; ++m) diag_[m] = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
  for (int m = 0; m <= degree; ++m) {
    for (int l = m + 2; l <= degree; ++l) {
      const double l2 = double(l) * l, m2 = double(m) * m, lm1 = l - 1.0;
      a_[legendre_offset(l, m)] = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
      b_[legendre_offset(l, m)] = std::sqrt((lm1 * lm1 - m2) / (4.0 * lm1 * lm1 - 1.0));
    }
  }
}

void LegendreTable::evaluate(double x, std::span<double> out) const {
  const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  double pmm = 1.0 / std::sqrt(kFourPi);
  for (int m = 0; m <= degree_; ++m) {
    if (m > 0) pmm *= diag_[m] * s;
    out[legendre_offset(m, m)] = pmm;
    if (m == degree_) break;
    out[legendre_offset(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pmm;
    for (int l = m + 2; l <= degree_; ++l) {
      const int o = legendre_offset(l, m);
      out[o] = a_[o] * (x * out[legendre_offset(l - 1, m)] - b_[o] * out[legendre_offset(l - 2, m)]);
    }
  }
}

void HarmonicTable::evaluate(const Direction& p, Eigen::Ref<Eigen::VectorXd> out) {
  const int deg = degree();
  legendre_.evaluate(std::clamp(p.z(), -1.0, 1.0), scratch_);
  const double rho = std::hypot(p.x(), p.y());
  const double c1 = rho > 0.0 ? p.x() / rho : 1.0;
  const double s1 = rho > 0.0 ? p.y() / rho : 0.0;
  const double root2 = std::sqrt(2.0);

  for (int l = 0; l <= deg; ++l) out[harmonic_offset(l, 0)] = scratch_[legendre_offset(l, 0)];
  double cm_prev = 1.0, sm_prev = 0.0;
  double cm = c1, sm = s1;
  for (int m = 1; m <= deg; ++m) {
    for (int l = m; l <= deg; ++l) {
      const double v = root2 * scratch_[legendre_offset(l, m)];
      out[harmonic_offset(l, m)] = v * cm;
      out[harmonic_offset(l, -m)] = v * sm;
    }
    const double cn = 2.0 * c1 * cm - cm_prev;
    const double sn = 2.0 * c1 * sm - sm_prev;
    cm_prev = cm;
    sm_prev = sm;
    cm = cn;
    sm = sn;
  }
}

HarmonicExpansion::HarmonicExpansion(int deg, Eigen::VectorXd c) : degree(deg), coeffs(std::move(c)) {
  if (deg < 0 || coeffs.size() != harmonic_count(deg)) {
    throw ShapeError("HarmonicExpansion: coefficient vector does not match degree");
  }
}

double HarmonicExpansion::coefficient(int l, int m) const {
  if (l < 0 || std::abs(m) > l) throw IndexError("HarmonicExpansion::coefficient: invalid index");
  return l > degree ? 0.0 : coeffs[harmonic_offset(l, m)];
}

double HarmonicExpansion::evaluate(const Direction& p) const {
  HarmonicTable table(degree);
  Eigen::VectorXd y(table.size());
  table.evaluate(p, y);
  return coeffs.dot(y);
}

Eigen::VectorXd HarmonicExpansion::evaluate(std::span<const Direction> points) const {
  HarmonicTable table(degree);
  Eigen::VectorXd y(table.size());
  Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    table.evaluate(points[i], y);
    out[static_cast<Eigen::Index>(i)] = coeffs.dot(y);
  }
  return out;
}

HarmonicExpansion HarmonicExpansion::resized(int deg) const {
  HarmonicExpansion out = zero(deg);
  const int n = std::min(harmonic_count(deg), harmonic_count(degree));
  out.coeffs.head(n) = coeffs.head(n);
  return out;
}

HarmonicExpansion operator+(const HarmonicExpansion& a, const HarmonicExpansion& b) {
  const int deg = std::max(a.degree, b.degree);
  HarmonicExpansion out = a.resized(deg);
  out.coeffs.head(b.coeffs.size()) += b.coeffs;
  return out;
}

HarmonicExpansion operator*(double s, const HarmonicExpansion& a) {
  return {a.degree, s * a.coeffs};
}

}  // namespace sphvar
