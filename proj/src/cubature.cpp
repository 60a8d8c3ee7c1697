#include "sphvar/cubature.hpp"

#include "sphvar/errors.hpp"
#include "sphvar/quadrature.hpp"

#include <cmath>
#include <string>

namespace sphvar {
namespace {

struct TrigTable {
  Eigen::MatrixXd cos;  // n_phi x (degree + 1)
  Eigen::MatrixXd sin;
};

TrigTable trig_table(int n_phi, int degree) {
  TrigTable t{Eigen::MatrixXd(n_phi, degree + 1), Eigen::MatrixXd(n_phi, degree + 1)};
  for (int b = 0; b < n_phi; ++b) {
    const double phi = 2.0 * kPi * b / n_phi;
    for (int m = 0; m <= degree; ++m) {
      t.cos(b, m) = std::cos(m * phi);
      t.sin(b, m) = std::sin(m * phi);
    }
  }
  return t;
}

}  // namespace

int floor_power(double B, int e) { return static_cast<int>(std::floor(std::pow(B, e) + 1e-9)); }
int ceil_power(double B, int e) { return static_cast<int>(std::ceil(std::pow(B, e) - 1e-9)); }

double lp_norm(const CubatureGrid& grid, const Eigen::VectorXd& values, double p) {
  if (values.size() != grid.size()) throw ShapeError("lp_norm: value count does not match grid");
  if (std::isinf(p)) return values.cwiseAbs().maxCoeff();
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must lie in [1, inf]");
  if (p == 2.0) return std::sqrt(grid.weights.dot(values.cwiseAbs2()));
  return std::pow(grid.weights.dot(values.cwiseAbs().array().pow(p).matrix()), 1.0 / p);
}

CubatureGrid make_product_grid(int exactness, int scale) {
  if (exactness < 0) throw ParameterError("make_product_grid: negative exactness");
  if (exactness > kMaxExactness) {
    throw ResourceError("make_product_grid: exactness " + std::to_string(exactness) + " exceeds limit " +
                        std::to_string(kMaxExactness));
  }
  CubatureGrid g;
  g.scale = scale;
  g.exactness = exactness;
  const int n_rings = (exactness + 2) / 2 + 1;  // ceil((L+1)/2) + 1
  g.n_phi = exactness + 1;
  const GaussLegendreRule gl = gauss_legendre(n_rings);
  g.ring_z = gl.nodes;
  g.ring_weight.resize(n_rings);
  g.nodes.reserve(static_cast<std::size_t>(n_rings) * g.n_phi);
  g.weights.resize(static_cast<Eigen::Index>(n_rings) * g.n_phi);
  for (int a = 0; a < n_rings; ++a) {
    g.ring_weight[a] = gl.weights[a] * 2.0 * kPi / g.n_phi;
    const double z = gl.nodes[a];
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int b = 0; b < g.n_phi; ++b) {
      const double phi = 2.0 * kPi * b / g.n_phi;
      g.nodes.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
      g.weights[static_cast<Eigen::Index>(a) * g.n_phi + b] = g.ring_weight[a];
    }
  }
  return g;
}

CubatureGrid build_cubature(int j, double B) {
  if (j < 0) throw ParameterError("build_cubature: negative scale");
  if (!(B > 1.0)) throw ParameterError("build_cubature: B must exceed 1");
  const double top = std::pow(B, j + 1);
  if (!(2.0 * top <= kMaxExactness)) {
    throw ResourceError("build_cubature: scale " + std::to_string(j) + " needs exactness above " +
                        std::to_string(kMaxExactness));
  }
  CubatureGrid g = make_product_grid(2 * floor_power(B, j + 1), j);

  // Spot-check exactness on a few deterministic pairs with l + l' <= L.
  RandomStream rng(derive_seed(0x5eed, static_cast<std::uint64_t>(j)));
  const int L = g.exactness;
  for (int trial = 0; trial < 6; ++trial) {
    const int l1 = static_cast<int>(rng.next() % (L / 2 + 1));
    const int l2 = static_cast<int>(rng.next() % (L - l1 + 1));
    const int m1 = static_cast<int>(rng.next() % (2 * l1 + 1)) - l1;
    const int m2 = trial % 2 == 0 ? m1 : static_cast<int>(rng.next() % (2 * l2 + 1)) - l2;
    if (std::abs(m2) > l2) continue;
    double s = 0.0;
    for (int k = 0; k < g.size(); ++k) {
      s += g.weights[k] * real_sph_harm({l1, m1}, g.nodes[k]) * real_sph_harm({l2, m2}, g.nodes[k]);
    }
    const double expect = (l1 == l2 && m1 == m2) ? 1.0 : 0.0;
    if (std::abs(s - expect) > 1e-9) {
      throw std::logic_error("build_cubature: exactness self-check failed at scale " + std::to_string(j));
    }
  }
  return g;
}

Eigen::VectorXd synthesize_on_grid(const CubatureGrid& grid, const HarmonicExpansion& f) {
  const int deg = f.degree;
  const int n_rings = grid.n_rings();
  LegendreTable leg(deg);
  std::vector<double> p(leg.size());
  // Per ring, the cos and sin amplitudes of each order m.
  Eigen::MatrixXd ccoef = Eigen::MatrixXd::Zero(n_rings, deg + 1);
  Eigen::MatrixXd scoef = Eigen::MatrixXd::Zero(n_rings, deg + 1);
  const double root2 = std::sqrt(2.0);
  for (int a = 0; a < n_rings; ++a) {
    leg.evaluate(grid.ring_z[a], p);
    for (int l = 0; l <= deg; ++l) ccoef(a, 0) += f.coeffs[harmonic_offset(l, 0)] * p[legendre_offset(l, 0)];
    for (int m = 1; m <= deg; ++m) {
      double c = 0.0, s = 0.0;
      for (int l = m; l <= deg; ++l) {
        const double v = p[legendre_offset(l, m)];
        c += f.coeffs[harmonic_offset(l, m)] * v;
        s += f.coeffs[harmonic_offset(l, -m)] * v;
      }
      ccoef(a, m) = root2 * c;
      scoef(a, m) = root2 * s;
    }
  }
  const TrigTable trig = trig_table(grid.n_phi, deg);
  const Eigen::MatrixXd values = ccoef * trig.cos.transpose() + scoef * trig.sin.transpose();  // rings x n_phi
  Eigen::VectorXd out(grid.size());
  for (int a = 0; a < n_rings; ++a) out.segment(static_cast<Eigen::Index>(a) * grid.n_phi, grid.n_phi) = values.row(a).transpose();
  return out;
}

HarmonicExpansion grid_adjoint(const CubatureGrid& grid, const Eigen::VectorXd& values, int degree) {
  if (values.size() != grid.size()) throw ShapeError("grid_adjoint: value count does not match grid");
  const int n_rings = grid.n_rings();
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> v(values.data(), n_rings,
                                                                                                   grid.n_phi);
  const TrigTable trig = trig_table(grid.n_phi, degree);
  const Eigen::MatrixXd csum = v * trig.cos;  // rings x (degree + 1)
  const Eigen::MatrixXd ssum = v * trig.sin;
  LegendreTable leg(degree);
  std::vector<double> p(leg.size());
  HarmonicExpansion out = HarmonicExpansion::zero(degree);
  const double root2 = std::sqrt(2.0);
  for (int a = 0; a < n_rings; ++a) {
    leg.evaluate(grid.ring_z[a], p);
    for (int l = 0; l <= degree; ++l) out.coeffs[harmonic_offset(l, 0)] += p[legendre_offset(l, 0)] * csum(a, 0);
    for (int m = 1; m <= degree; ++m) {
      const double c = root2 * csum(a, m), s = root2 * ssum(a, m);
      for (int l = m; l <= degree; ++l) {
        const double pv = p[legendre_offset(l, m)];
        out.coeffs[harmonic_offset(l, m)] += pv * c;
        out.coeffs[harmonic_offset(l, -m)] += pv * s;
      }
    }
  }
  return out;
}

HarmonicExpansion grid_transform(const CubatureGrid& grid, const Eigen::VectorXd& values, int degree) {
  if (values.size() != grid.size()) throw ShapeError("grid_transform: value count does not match grid");
  return grid_adjoint(grid, grid.weights.cwiseProduct(values), degree);
}

}  // namespace sphvar
