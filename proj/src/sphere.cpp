#include "sphvar/sphere.hpp"

#include "sphvar/errors.hpp"

#include <algorithm>

namespace sphvar {

Direction::Direction(double x, double y, double z) {
  Eigen::Vector3d v(x, y, z);
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError("Direction: cannot normalize a zero or non-finite vector");
  }
  v_ = v / n;
}

Direction Direction::from_angles(double theta, double phi) {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

double Direction::theta() const {
  return std::atan2(std::hypot(v_.x(), v_.y()), v_.z());
}

double Direction::phi() const {
  if (v_.x() == 0.0 && v_.y() == 0.0) return 0.0;
  double p = std::atan2(v_.y(), v_.x());
  if (p < 0.0) p += 2.0 * kPi;
  if (p >= 2.0 * kPi) p = 0.0;
  return p;
}

double geodesic_distance(const Direction& a, const Direction& b) {
  const double c = a.vec().cross(b.vec()).norm();
  const double d = a.vec().dot(b.vec());
  return std::atan2(c, d);
}

Direction sample_uniform(RandomStream& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

std::vector<Direction> sample_uniform(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("sample_uniform: requested zero samples");
  RandomStream rng(seed);
  std::vector<Direction> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_uniform(rng));
  return out;
}

}  // namespace sphvar
