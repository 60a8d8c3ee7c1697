#include "sphvar/window.hpp"

#include "sphvar/errors.hpp"
#include "sphvar/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace sphvar {
namespace {

double bump(double t) {
  const double d = 1.0 - t * t;
  return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
}

}  // namespace

Window::Window(double B, int grid_resolution) : B_(B) {
  if (!(B > 1.0) || !std::isfinite(B)) throw ParameterError("Window: dilation base B must exceed 1");
  if (grid_resolution < 1000) throw ParameterError("Window: grid_resolution must be at least 1000");

  const int cells = grid_resolution;
  const double h = 2.0 / cells;
  u_.resize(cells + 1);
  for (int i = 0; i <= cells; ++i) u_[i] = -1.0 + h * i;
  u_.back() = 1.0;

  // 16-point Gauss-Legendre on every cell: >= 16000 bump evaluations.
  const GaussLegendreRule gl = gauss_legendre(16);
  std::vector<double> cumulative(cells + 1, 0.0);
  for (int i = 0; i < cells; ++i) {
    const double mid = 0.5 * (u_[i] + u_[i + 1]);
    double cell = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) cell += gl.weights[q] * bump(mid + 0.5 * h * gl.nodes[q]);
    cumulative[i + 1] = cumulative[i] + 0.5 * h * cell;
  }
  const double total = cumulative.back();
  phi_.resize(cells + 1);
  slope_.resize(cells + 1);
  for (int i = 0; i <= cells; ++i) {
    phi_[i] = cumulative[i] / total;
    slope_[i] = bump(u_[i]) / total;
  }
  phi_.front() = 0.0;
  phi_.back() = 1.0;

  // Fritsch-Carlson limiter keeps the Hermite interpolant monotone.
  for (int i = 0; i < cells; ++i) {
    const double delta = (phi_[i + 1] - phi_[i]) / h;
    if (delta <= 0.0) {
      slope_[i] = slope_[i + 1] = 0.0;
      continue;
    }
    const double a = slope_[i] / delta, b = slope_[i + 1] / delta;
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      slope_[i] = tau * a * delta;
      slope_[i + 1] = tau * b * delta;
    }
  }
}

double Window::bump_integral(double u) const {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const int cells = grid_resolution();
  const double h = 2.0 / cells;
  const int i = std::clamp(static_cast<int>((u + 1.0) / h), 0, cells - 1);
  const double t = (u - u_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double v = h00 * phi_[i] + h10 * h * slope_[i] + h01 * phi_[i + 1] + h11 * h * slope_[i + 1];
  return std::clamp(v, 0.0, 1.0);
}

double Window::plateau(double t) const {
  const double lo = 1.0 / B_;
  if (t <= lo) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = 1.0 - 2.0 * B_ * (t - lo) / (B_ - 1.0);
  return bump_integral(u);
}

double Window::squared(double x) const {
  if (x <= 0.0) return 0.0;
  return std::max(0.0, plateau(x / B_) - plateau(x));
}

double Window::operator()(double x) const { return std::sqrt(squared(x)); }

}  // namespace sphvar
