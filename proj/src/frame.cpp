#include "sphvar/frame.hpp"

#include "sphvar/errors.hpp"
#include "sphvar/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sphvar {

std::string FrameParams::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "B = " << B << "\n";
  os << "j_max = " << j_max << "\n";
  os << "grid_resolution = " << grid_resolution << "\n";
  return os.str();
}

FrameParams FrameParams::from_text(const std::string& text) {
  FrameParams p;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw ParameterError("frame config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "B") {
        p.B = std::stod(value);
      } else if (key == "j_max") {
        p.j_max = std::stoi(value);
      } else if (key == "grid_resolution") {
        p.grid_resolution = std::stoi(value);
      } else {
        throw ParameterError("frame config: unknown key '" + key + "'");
      }
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const ParameterError*>(&e)) throw;
      throw ParameterError("frame config: bad value for '" + key + "': " + value);
    }
  }
  return p;
}

NeedletFrame::NeedletFrame(const FrameParams& params) : params_(params), window_(params.B, params.grid_resolution) {
  if (params.j_max < 0) throw ParameterError("NeedletFrame: j_max must be >= 0");
  grids_.reserve(params.j_max + 1);
  band_weights_.reserve(params.j_max + 1);
  for (int j = 0; j <= params.j_max; ++j) {
    grids_.push_back(build_cubature(j, params.B));
    const int hi = floor_power(params.B, j + 1);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(hi + 1);
    const double scale = std::pow(params.B, j);
    for (int l = std::max(1, ceil_power(params.B, j - 1)); l <= hi; ++l) w[l] = window_(l / scale);
    band_weights_.push_back(std::move(w));
  }
}

void NeedletFrame::check_scale(int j) const {
  if (j < 0 || j > params_.j_max) throw IndexError("NeedletFrame: scale " + std::to_string(j) + " out of range");
}

int NeedletFrame::band_low(int j) const {
  check_scale(j);
  return std::max(1, ceil_power(params_.B, j - 1));
}

int NeedletFrame::band_high(int j) const {
  check_scale(j);
  return floor_power(params_.B, j + 1);
}

const CubatureGrid& NeedletFrame::grid(int j) const {
  check_scale(j);
  return grids_[j];
}

const Eigen::VectorXd& NeedletFrame::band_weights(int j) const {
  check_scale(j);
  return band_weights_[j];
}

double NeedletFrame::profile(int j, double t) const {
  const Eigen::VectorXd& w = band_weights(j);
  t = std::clamp(t, -1.0, 1.0);
  double p0 = 1.0, p1 = t, sum = 0.0;
  for (int l = 0; l < w.size(); ++l) {
    double pl;
    if (l == 0) {
      pl = 1.0;
    } else if (l == 1) {
      pl = t;
    } else {
      pl = ((2.0 * l - 1.0) * t * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = pl;
    }
    if (w[l] != 0.0) sum += w[l] * (2.0 * l + 1.0) / kFourPi * pl;
  }
  return sum;
}

CoefficientPyramid CoefficientPyramid::zeros(const NeedletFrame& frame) {
  CoefficientPyramid c;
  for (int j = 0; j <= frame.j_max(); ++j) c.bands.push_back(Eigen::VectorXd::Zero(frame.K(j)));
  return c;
}

bool CoefficientPyramid::matches(const NeedletFrame& frame) const {
  if (num_bands() != frame.num_scales()) return false;
  for (int j = 0; j < num_bands(); ++j) {
    if (bands[j].size() != frame.K(j)) return false;
  }
  return true;
}

void CoefficientPyramid::check_shape(const NeedletFrame& frame) const {
  if (!matches(frame)) throw ShapeError("CoefficientPyramid: shape does not match frame");
}

double CoefficientPyramid::energy() const {
  double e = scaling * scaling;
  for (const auto& b : bands) e += b.squaredNorm();
  return e;
}

bool CoefficientPyramid::operator==(const CoefficientPyramid& o) const {
  if (scaling != o.scaling || bands.size() != o.bands.size()) return false;
  for (std::size_t j = 0; j < bands.size(); ++j) {
    if (bands[j].size() != o.bands[j].size() || bands[j] != o.bands[j]) return false;
  }
  return true;
}

double evaluate_needlet(const NeedletFrame& frame, int j, int k, const Direction& p) {
  const CubatureGrid& g = frame.grid(j);
  if (k < 0 || k >= g.size()) throw IndexError("evaluate_needlet: node index out of range");
  const double c = std::cos(geodesic_distance(g.nodes[k], p));
  return std::sqrt(g.weights[k]) * frame.profile(j, c);
}

namespace {

double profile_norm(const NeedletFrame& frame, int j, double p) {
  if (std::isinf(p)) return std::abs(frame.profile(j, 1.0));
  if (!(p >= 1.0)) throw DomainError("needlet_norm: p must lie in [1, inf]");
  const int deg = frame.band_high(j);
  const GaussLegendreRule gl = gauss_legendre(8 * deg + 256);
  double s = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(std::abs(frame.profile(j, gl.nodes[i])), p);
  return std::pow(2.0 * kPi * s, 1.0 / p);
}

}  // namespace

double needlet_norm(const NeedletFrame& frame, int j, int k, double p) {
  const CubatureGrid& g = frame.grid(j);
  if (k < 0 || k >= g.size()) throw IndexError("needlet_norm: node index out of range");
  return std::sqrt(g.weights[k]) * profile_norm(frame, j, p);
}

CoefficientPyramid analyze_grid_values(const NeedletFrame& frame, const Eigen::VectorXd& values) {
  return analyze_expansion(frame, grid_transform(frame.finest_grid(), values, frame.max_degree()));
}

CoefficientPyramid analyze(const NeedletFrame& frame, const PointFunction& f) {
  const CubatureGrid& g = frame.finest_grid();
  Eigen::VectorXd values(g.size());
  for (int i = 0; i < g.size(); ++i) values[i] = f(g.nodes[i]);
  return analyze_grid_values(frame, values);
}

CoefficientPyramid analyze_expansion(const NeedletFrame& frame, const HarmonicExpansion& f, int top_scale) {
  if (top_scale < 0) top_scale = frame.j_max();
  CoefficientPyramid c = CoefficientPyramid::zeros(frame);
  c.scaling = f.coeffs[0];
  for (int j = 0; j <= std::min(top_scale, frame.j_max()); ++j) {
    const int hi = frame.band_high(j);
    const Eigen::VectorXd& w = frame.band_weights(j);
    HarmonicExpansion filtered = f.resized(hi);
    for (int l = 0; l <= hi; ++l) {
      filtered.coeffs.segment(l * l, 2 * l + 1) *= w[l];
    }
    const CubatureGrid& g = frame.grid(j);
    c.bands[j] = g.weights.cwiseSqrt().cwiseProduct(synthesize_on_grid(g, filtered));
  }
  return c;
}

HarmonicExpansion pyramid_to_expansion(const NeedletFrame& frame, const CoefficientPyramid& coeffs) {
  coeffs.check_shape(frame);
  HarmonicExpansion out = HarmonicExpansion::zero(frame.max_degree());
  out.coeffs[0] = coeffs.scaling;
  for (int j = 0; j <= frame.j_max(); ++j) {
    if (coeffs.bands[j].isZero(0.0)) continue;
    const CubatureGrid& g = frame.grid(j);
    const int hi = frame.band_high(j);
    HarmonicExpansion part = grid_adjoint(g, g.weights.cwiseSqrt().cwiseProduct(coeffs.bands[j]), hi);
    const Eigen::VectorXd& w = frame.band_weights(j);
    for (int l = 0; l <= hi; ++l) part.coeffs.segment(l * l, 2 * l + 1) *= w[l];
    out.coeffs.head(part.coeffs.size()) += part.coeffs;
  }
  return out;
}

Eigen::VectorXd synthesize(const NeedletFrame& frame, const CoefficientPyramid& coeffs, std::span<const Direction> points) {
  return pyramid_to_expansion(frame, coeffs).evaluate(points);
}

Eigen::VectorXd synthesize_on_finest_grid(const NeedletFrame& frame, const CoefficientPyramid& coeffs) {
  return synthesize_on_grid(frame.finest_grid(), pyramid_to_expansion(frame, coeffs));
}

}  // namespace sphvar
