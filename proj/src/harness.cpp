#include "sphvar/harness.hpp"

#include "sphvar/errors.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace sphvar {

double lp_risk(const FunctionEstimate& estimate, const Eigen::VectorXd& truth_on_finest_grid, double p) {
  const CubatureGrid& grid = estimate.frame().finest_grid();
  const Eigen::VectorXd diff = estimate.on_grid(grid) - truth_on_finest_grid;
  return lp_norm(grid, diff, p);
}

double lp_risk(const FunctionEstimate& estimate, const PointFunction& truth, double p) {
  const CubatureGrid& grid = estimate.frame().finest_grid();
  Eigen::VectorXd t(grid.size());
  for (int i = 0; i < grid.size(); ++i) t[i] = truth(grid.nodes[i]);
  return lp_risk(estimate, t, p);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("fit_line: need at least two (x, y) pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ParameterError("fit_line: x values are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::degenerate: return "degenerate";
  }
  return "degenerate";
}

Verdict parse_verdict(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "degenerate") return Verdict::degenerate;
  throw DataError("unknown verdict '" + s + "'");
}

namespace {

double risk_power(double risk, double p) { return std::isinf(p) ? risk : std::pow(risk, p); }

void mean_se(const std::vector<double>& v, double& mean, double& se) {
  const double n = static_cast<double>(v.size());
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
}

}  // namespace

RiskSample replicate_risks(const Scenario& scenario, std::size_t n_index, int replicates, int threads) {
  const ScenarioSpec& spec = scenario.spec();
  const std::size_t N = spec.N_grid.at(n_index);
  const std::uint64_t base = derive_seed(spec.seed, n_index);
  RiskSample out;
  out.risk_p.assign(static_cast<std::size_t>(replicates), 0.0);
  if (spec.known_mean) out.km_risk_p.assign(static_cast<std::size_t>(replicates), 0.0);

  Eigen::VectorXd g_squared;
  if (spec.known_mean) g_squared = scenario.g_on_grid().cwiseAbs2();

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int r = next++; r < replicates; r = next++) {
      const Dataset data = generate_dataset(scenario, N, derive_seed(base, static_cast<std::uint64_t>(r)));
      const FunctionEstimate V = estimate_variance(data, scenario.frame(), scenario.config());
      out.risk_p[static_cast<std::size_t>(r)] = risk_power(lp_risk(V, scenario.variance_on_grid(), spec.p), spec.p);
      if (spec.known_mean) {
        const FunctionEstimate km = estimate_variance_known_mean(data, g_squared, scenario.frame(), scenario.config());
        out.km_risk_p[static_cast<std::size_t>(r)] = risk_power(lp_risk(km, scenario.variance_on_grid(), spec.p), spec.p);
      }
    }
  };
  const int n_workers = std::max(1, std::min(threads, replicates));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

RateReport run_rate_study(const Scenario& scenario) {
  const ScenarioSpec& spec = scenario.spec();
  if (spec.N_grid.size() < 3) throw ScenarioError("rate study needs at least 3 sample sizes");
  if (spec.replicates < 2) throw ScenarioError("rate study needs at least 2 replicates");

  RateReport report;
  report.tolerance = spec.tolerance > 0.0 ? spec.tolerance : 0.2 * spec.p;
  const RateExponents theory =
      rate_exponent(spec.theory.case_id, spec.theory.alpha, spec.theory.beta, spec.theory.rho, spec.theory.mu, spec.p);
  report.regime = to_string(theory.regime);
  report.theory = -(std::isinf(spec.p) ? 1.0 : spec.p) * theory.R;

  bool all_dominated = true;
  for (std::size_t a = 0; a < spec.N_grid.size(); ++a) {
    const RiskSample rs = replicate_risks(scenario, a, spec.replicates, spec.threads);
    RatePoint pt;
    pt.N = spec.N_grid[a];
    pt.n_reps = spec.replicates;
    mean_se(rs.risk_p, pt.mean_risk_p, pt.se);
    if (spec.known_mean) {
      double m = 0.0, se = 0.0;
      mean_se(rs.km_risk_p, m, se);
      pt.km_mean_risk_p = m;
      pt.km_se = se;
      all_dominated = all_dominated && m <= pt.mean_risk_p;
    }
    report.points.push_back(pt);
  }
  if (spec.known_mean) report.km_dominates = all_dominated;

  std::vector<double> x, xl, y;
  bool degenerate = false;
  for (const auto& pt : report.points) {
    if (!(pt.mean_risk_p > 0.0) || !std::isfinite(pt.mean_risk_p)) degenerate = true;
    const double n = static_cast<double>(pt.N);
    x.push_back(std::log(n / std::log(n)));
    xl.push_back(std::log(n));
    y.push_back(std::log(pt.mean_risk_p));
  }
  if (degenerate) {
    report.verdict = Verdict::degenerate;
    return report;
  }
  report.slope = fit_line(x, y).slope;
  report.slope_log_n = fit_line(xl, y).slope;
  report.verdict = std::abs(report.slope - report.theory) <= report.tolerance ? Verdict::pass : Verdict::fail;
  return report;
}

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render_report(const RateReport& report, ReportFormat format) {
  const bool km = report.km_dominates.has_value();
  if (format == ReportFormat::csv) {
    std::string s = km ? "N,mean_risk_p,se,n_reps,km_mean_risk_p,km_se\n" : "N,mean_risk_p,se,n_reps\n";
    for (const auto& pt : report.points) {
      s += std::to_string(pt.N) + "," + g17(pt.mean_risk_p) + "," + g17(pt.se) + "," + std::to_string(pt.n_reps);
      if (km) s += "," + g17(pt.km_mean_risk_p.value_or(0.0)) + "," + g17(pt.km_se.value_or(0.0));
      s += "\n";
    }
    s += "slope," + g17(report.slope) + "\n";
    s += "slope_log_n," + g17(report.slope_log_n) + "\n";
    s += "theory," + g17(report.theory) + "\n";
    s += "tolerance," + g17(report.tolerance) + "\n";
    s += "regime," + report.regime + "\n";
    if (km) s += std::string("km_dominates,") + (*report.km_dominates ? "true" : "false") + "\n";
    s += "verdict," + to_string(report.verdict) + "\n";
    return s;
  }
  nlohmann::json j;
  j["points"] = nlohmann::json::array();
  for (const auto& pt : report.points) {
    nlohmann::json p{{"N", pt.N}, {"mean_risk_p", pt.mean_risk_p}, {"se", pt.se}, {"n_reps", pt.n_reps}};
    if (pt.km_mean_risk_p) {
      p["km_mean_risk_p"] = *pt.km_mean_risk_p;
      p["km_se"] = pt.km_se.value_or(0.0);
    }
    j["points"].push_back(p);
  }
  j["slope"] = report.slope;
  j["slope_log_n"] = report.slope_log_n;
  j["theory"] = report.theory;
  j["tolerance"] = report.tolerance;
  j["regime"] = report.regime;
  j["verdict"] = to_string(report.verdict);
  if (km) j["km_dominates"] = *report.km_dominates;
  return j.dump(2) + "\n";
}

void emit_report(const RateReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << render_report(report, format);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

RateReport parse_report_json(const std::string& text) {
  RateReport r;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    for (const auto& p : j.at("points")) {
      RatePoint pt;
      pt.N = p.at("N").get<std::size_t>();
      pt.mean_risk_p = p.at("mean_risk_p").get<double>();
      pt.se = p.at("se").get<double>();
      pt.n_reps = p.at("n_reps").get<int>();
      if (p.contains("km_mean_risk_p")) {
        pt.km_mean_risk_p = p.at("km_mean_risk_p").get<double>();
        pt.km_se = p.at("km_se").get<double>();
      }
      r.points.push_back(pt);
    }
    r.slope = j.at("slope").get<double>();
    r.slope_log_n = j.at("slope_log_n").get<double>();
    r.theory = j.at("theory").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.regime = j.at("regime").get<std::string>();
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    if (j.contains("km_dominates")) r.km_dominates = j.at("km_dominates").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
  return r;
}

}  // namespace sphvar
