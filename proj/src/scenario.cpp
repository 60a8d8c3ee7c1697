#include "sphvar/scenario.hpp"

#include "sphvar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sphvar {

using nlohmann::json;

NoiseFamily parse_noise_family(const std::string& name) {
  if (name == "gaussian") return NoiseFamily::gaussian;
  if (name == "rademacher") return NoiseFamily::rademacher;
  if (name == "uniform") return NoiseFamily::uniform;
  throw ScenarioError("unknown noise family '" + name + "'");
}

std::string to_string(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::gaussian: return "gaussian";
    case NoiseFamily::rademacher: return "rademacher";
    case NoiseFamily::uniform: return "uniform";
  }
  return "gaussian";
}

double noise_gamma3(NoiseFamily) { return 0.0; }

double noise_gamma4(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::gaussian: return 3.0;
    case NoiseFamily::rademacher: return 1.0;
    case NoiseFamily::uniform: return 1.8;
  }
  return 3.0;
}

double draw_noise(NoiseFamily f, RandomStream& rng) {
  switch (f) {
    case NoiseFamily::gaussian: return rng.normal();
    case NoiseFamily::rademacher: return rng.coin() ? 1.0 : -1.0;
    case NoiseFamily::uniform: return rng.uniform(-std::sqrt(3.0), std::sqrt(3.0));
  }
  return 0.0;
}

FunctionSpec FunctionSpec::constant_function(double c) {
  FunctionSpec f;
  f.constant = c;
  return f;
}

HarmonicExpansion FunctionSpec::expansion() const {
  HarmonicExpansion out;
  if (kind == Kind::harmonics) {
    int deg = 0;
    for (const auto& t : terms) {
      if (t.l < 0 || std::abs(t.m) > t.l) throw ScenarioError("harmonic term has invalid (l, m)");
      deg = std::max(deg, t.l);
    }
    out = HarmonicExpansion::zero(deg);
    for (const auto& t : terms) out.coeffs[harmonic_offset(t.l, t.m)] += t.coeff;
  } else {
    const NeedletFrame frame(B, j_max);
    out = pyramid_to_expansion(frame, sample_besov_ball(besov, frame, seed, sparsity));
  }
  out.coeffs[0] += constant * std::sqrt(kFourPi);
  return out;
}

void to_json(json& j, const FunctionSpec& f) {
  j = json::object();
  j["constant"] = f.constant;
  if (f.kind == FunctionSpec::Kind::harmonics) {
    j["type"] = "harmonics";
    j["terms"] = json::array();
    for (const auto& t : f.terms) j["terms"].push_back({{"l", t.l}, {"m", t.m}, {"coeff", t.coeff}});
  } else {
    j["type"] = "besov";
    auto inf_or = [](double x) { return std::isinf(x) ? json("inf") : json(x); };
    j["s"] = f.besov.s;
    j["r"] = inf_or(f.besov.r);
    j["q"] = inf_or(f.besov.q);
    j["R"] = f.besov.R;
    j["sparsity"] = f.sparsity;
    j["seed"] = f.seed;
    j["B"] = f.B;
    j["j_max"] = f.j_max;
  }
}

namespace {

double number_or_inf(const json& v) {
  if (v.is_string() && (v == "inf" || v == "infinity")) return kInfinity;
  return v.get<double>();
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void from_json(const json& j, FunctionSpec& f) {
  f = FunctionSpec{};
  const std::string type = j.value("type", "harmonics");
  read_opt(j, "constant", f.constant);
  if (type == "harmonics") {
    f.kind = FunctionSpec::Kind::harmonics;
    if (j.contains("terms")) {
      for (const auto& t : j.at("terms")) f.terms.push_back({t.at("l").get<int>(), t.at("m").get<int>(), t.at("coeff").get<double>()});
    }
  } else if (type == "besov") {
    f.kind = FunctionSpec::Kind::besov;
    f.besov.s = j.at("s").get<double>();
    f.besov.r = number_or_inf(j.at("r"));
    f.besov.q = number_or_inf(j.at("q"));
    f.besov.R = j.at("R").get<double>();
    read_opt(j, "sparsity", f.sparsity);
    read_opt(j, "seed", f.seed);
    read_opt(j, "B", f.B);
    read_opt(j, "j_max", f.j_max);
  } else {
    throw ScenarioError("function type must be 'harmonics' or 'besov', got '" + type + "'");
  }
}

json ScenarioSpec::to_json() const {
  json j;
  j["g"] = g;
  j["variance"] = variance;
  j["v0"] = v0;
  j["noise"] = to_string(noise);
  j["N"] = N_grid;
  j["replicates"] = replicates;
  j["p"] = std::isinf(p) ? json("inf") : json(p);
  json e{{"B", estimator.B}};
  if (universal_kappa) {
    e["kappa"] = "universal";
  } else {
    e["kappa_g"] = estimator.kappa_g;
    e["kappa_h"] = estimator.kappa_h;
    e["kappa_v"] = estimator.kappa_v;
  }
  if (estimator.J_override) e["J"] = *estimator.J_override;
  j["estimator"] = e;
  j["theory"] = {{"case", theory.case_id}, {"alpha", theory.alpha}, {"beta", theory.beta}, {"rho", theory.rho}, {"mu", theory.mu}};
  j["tolerance"] = tolerance;
  j["seed"] = seed;
  j["known_mean"] = known_mean;
  j["threads"] = threads;
  return j;
}

ScenarioSpec ScenarioSpec::from_json(const json& j) {
  ScenarioSpec s;
  try {
    if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");
    static const char* known[] = {"g",    "variance",  "v0",   "noise",      "N",       "replicates", "p",
                                  "estimator", "theory", "tolerance", "seed", "known_mean", "threads"};
    for (const auto& [key, _] : j.items()) {
      if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
        throw ScenarioError("unknown scenario field '" + key + "'");
      }
    }
    if (j.contains("g")) s.g = j.at("g").get<FunctionSpec>();
    if (j.contains("variance")) s.variance = j.at("variance").get<FunctionSpec>();
    read_opt(j, "v0", s.v0);
    if (j.contains("noise")) s.noise = parse_noise_family(j.at("noise").get<std::string>());
    read_opt(j, "N", s.N_grid);
    read_opt(j, "replicates", s.replicates);
    if (j.contains("p")) s.p = number_or_inf(j.at("p"));
    if (j.contains("estimator")) {
      const json& e = j.at("estimator");
      read_opt(e, "B", s.estimator.B);
      if (e.contains("kappa") && e.at("kappa").is_string()) {
        if (e.at("kappa") != "universal") throw ScenarioError("estimator.kappa must be a number or \"universal\"");
        s.universal_kappa = true;
      } else if (e.contains("kappa")) {
        s.estimator.kappa_g = s.estimator.kappa_h = s.estimator.kappa_v = e.at("kappa").get<double>();
      }
      read_opt(e, "kappa_g", s.estimator.kappa_g);
      read_opt(e, "kappa_h", s.estimator.kappa_h);
      read_opt(e, "kappa_v", s.estimator.kappa_v);
      if (e.contains("J") && !e.at("J").is_null()) s.estimator.J_override = e.at("J").get<int>();
    }
    if (j.contains("theory")) {
      const json& t = j.at("theory");
      read_opt(t, "case", s.theory.case_id);
      read_opt(t, "alpha", s.theory.alpha);
      read_opt(t, "beta", s.theory.beta);
      read_opt(t, "rho", s.theory.rho);
      read_opt(t, "mu", s.theory.mu);
    }
    read_opt(j, "tolerance", s.tolerance);
    read_opt(j, "seed", s.seed);
    read_opt(j, "known_mean", s.known_mean);
    read_opt(j, "threads", s.threads);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what());
  }
  return s;
}

ScenarioSpec ScenarioSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  try {
    return from_json(json::parse(in, nullptr, true, true));
  } catch (const json::parse_error& e) {
    throw ScenarioError("scenario file '" + path + "': " + e.what());
  }
}

Scenario::Scenario(ScenarioSpec spec) : spec_(std::move(spec)), config_(spec_.estimator) {
  if (spec_.N_grid.empty()) throw ScenarioError("scenario needs at least one sample size");
  if (spec_.replicates < 1) throw ScenarioError("scenario needs at least one replicate");
  if (!(spec_.p >= 1.0)) throw ScenarioError("risk exponent p must lie in [1, inf]");
  if (!(spec_.v0 >= 0.0)) throw ScenarioError("variance floor v0 must be >= 0");
  if (spec_.threads < 1) throw ScenarioError("threads must be >= 1");
  try {
    config_.validate();
  } catch (const ParameterError& e) {
    throw ScenarioError(e.what());
  }

  int top = 0;
  for (std::size_t N : spec_.N_grid) {
    if (N < 16) throw ScenarioError("sample sizes must be >= 16");
    top = std::max(top, resolution_level(N, config_) - 1);
  }
  for (const FunctionSpec* f : {&spec_.g, &spec_.variance}) {
    if (f->kind == FunctionSpec::Kind::besov) top = std::max(top, f->j_max);
  }
  frame_ = std::make_shared<const NeedletFrame>(config_.B, top);

  g_ = spec_.g.expansion();
  V_ = spec_.variance.expansion();
  const CubatureGrid& grid = frame_->finest_grid();
  g_grid_ = synthesize_on_grid(grid, g_);
  V_grid_ = synthesize_on_grid(grid, V_);

  const double audit_min = std::min(V_.evaluate(sample_uniform(10000, 0xa0d17)).minCoeff(), V_grid_.minCoeff());
  if (audit_min < 0.0) throw ScenarioError("variance function is negative on the audit points");
  if (audit_min < spec_.v0) {
    std::ostringstream os;
    os << "variance function drops to " << audit_min << " below the floor v0 = " << spec_.v0;
    throw ScenarioError(os.str());
  }

  if (spec_.universal_kappa) {
    // Mean squares of Y and Y^2 under the truth, by quadrature.
    const Eigen::ArrayXd g = g_grid_.array(), V = V_grid_.array();
    const double g3 = noise_gamma3(spec_.noise), g4 = noise_gamma4(spec_.noise);
    const Eigen::ArrayXd m2 = g.square() + V;
    const Eigen::ArrayXd m4 = g.pow(4) + 6.0 * g.square() * V + 4.0 * g3 * g * V.pow(1.5) + g4 * V.square();
    const double area = grid.weights.sum();
    const double mean_m2 = grid.weights.dot(m2.matrix()) / area;
    const double mean_m4 = grid.weights.dot(m4.matrix()) / area;
    config_.kappa_g = universal_kappa(*frame_, top, mean_m2);
    config_.kappa_h = config_.kappa_v = universal_kappa(*frame_, top, mean_m4);
  }
}

Dataset generate_dataset(const Scenario& scenario, std::size_t N, std::uint64_t seed) {
  if (N == 0) throw ScenarioError("generate_dataset: N must be positive");
  RandomStream rng(seed);
  const HarmonicExpansion& g = scenario.g();
  const HarmonicExpansion& V = scenario.variance();
  HarmonicTable table(std::max(g.degree, V.degree));
  Eigen::VectorXd y(table.size());
  const NoiseFamily family = scenario.spec().noise;
  Dataset d(N);
  for (auto& s : d) {
    s.X = sample_uniform(rng);
    const double eps = draw_noise(family, rng);
    table.evaluate(s.X, y);
    const double gx = g.coeffs.dot(y.head(g.coeffs.size()));
    const double vx = V.coeffs.dot(y.head(V.coeffs.size()));
    s.Y = gx + std::sqrt(std::max(vx, 0.0)) * eps;
  }
  return d;
}

}  // namespace sphvar
