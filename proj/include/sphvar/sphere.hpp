#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace sphvar {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// A point on the unit sphere, stored as a unit 3-vector.
///
/// Colatitude theta lies in [0, pi] and longitude phi in [0, 2 pi); the
/// longitude of either pole is reported as 0.
class Direction {
 public:
  Direction() : v_(0.0, 0.0, 1.0) {}

  /// Normalizes (x, y, z). The zero vector is rejected.
  Direction(double x, double y, double z);
  explicit Direction(const Eigen::Vector3d& v) : Direction(v.x(), v.y(), v.z()) {}

  static Direction from_angles(double theta, double phi);
  static Direction north() { return {0.0, 0.0, 1.0}; }
  static Direction south() { return {0.0, 0.0, -1.0}; }

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  const Eigen::Vector3d& vec() const { return v_; }

  double theta() const;
  double phi() const;

  Direction operator-() const { return Direction(-v_); }
  bool operator==(const Direction& o) const { return v_ == o.v_; }

 private:
  Eigen::Vector3d v_;
};

/// Great-circle distance in [0, pi], via atan2(|a x b|, a . b) which stays
/// accurate near 0 and pi where acos loses digits.
double geodesic_distance(const Direction& a, const Direction& b);

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the `stream`-th child of `seed`. Children of distinct indices
/// (and of distinct parents) are statistically independent streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Reproducible pseudo-random stream. Identical seeds give identical draws.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }
  RandomStream split(std::uint64_t stream) const { return RandomStream(derive_seed(seed_, stream)); }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  bool coin() { return (engine_() >> 63) != 0; }
  std::uint64_t next() { return engine_(); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// One draw from the uniform surface measure: z ~ U(-1, 1), phi ~ U(0, 2 pi).
Direction sample_uniform(RandomStream& rng);

/// `n` i.i.d. uniform directions, deterministic given `seed`. Throws
/// ParameterError for n = 0.
std::vector<Direction> sample_uniform(std::size_t n, std::uint64_t seed);

}  // namespace sphvar
