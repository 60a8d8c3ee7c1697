#include "sphvar/errors.hpp"
#include "sphvar/harness.hpp"
#include "sphvar/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

using namespace sphvar;

namespace {

void output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

int frame_info(double B, int j_max, int resolution) {
  const NeedletFrame frame(B, j_max, resolution);
  std::printf("B = %g, j_max = %d, window grid = %d\n", B, j_max, resolution);
  std::printf("%3s %6s %6s %10s %10s %12s\n", "j", "l_lo", "l_hi", "exactness", "K_j", "K_j/B^2j");
  for (int j = 0; j <= j_max; ++j) {
    std::printf("%3d %6d %6d %10d %10d %12.4f\n", j, frame.band_low(j), frame.band_high(j), frame.grid(j).exactness,
                frame.K(j), frame.K(j) / std::pow(B, 2.0 * j));
  }
  double worst = 0.0;
  const int l_top = static_cast<int>(std::floor(std::pow(B, j_max) + 1e-9));
  for (int l = 1; l <= l_top; ++l) {
    double s = 0.0;
    for (int j = 0; j <= j_max; ++j) {
      const Eigen::VectorXd& w = frame.band_weights(j);
      if (l < w.size()) s += w[l] * w[l];
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  std::printf("partition of unity, l in [1, %d]: max |sum_j b^2 - 1| = %.3e\n", l_top, worst);
  return 0;
}

int analyze_cmd(const std::string& spec_path, double B, int j_max, const std::string& format, const std::string& out) {
  const FunctionSpec spec = nlohmann::json::parse(read_file(spec_path)).get<FunctionSpec>();
  const NeedletFrame frame(B, j_max);
  const CoefficientPyramid c = analyze_expansion(frame, spec.expansion());
  output(out, format == "json" ? pyramid_to_json(c) : pyramid_to_csv(c));
  return 0;
}

struct EstimateOptions {
  std::string data;
  std::string scenario;
  std::size_t N = 4096;
  std::uint64_t seed = 1;
  std::string target = "variance";
  double B = 2.0;
  double kappa_g = 1.0, kappa_h = 1.0, kappa_v = 1.0;
  std::string coeffs_out;
  std::string values_out;
  int eval_points = 0;
};

int estimate_cmd(const EstimateOptions& o) {
  Dataset data;
  EstimatorConfig config;
  config.B = o.B;
  config.kappa_g = o.kappa_g;
  config.kappa_h = o.kappa_h;
  config.kappa_v = o.kappa_v;
  std::shared_ptr<const NeedletFrame> frame;
  std::optional<Scenario> scenario;
  if (!o.scenario.empty()) {
    ScenarioSpec spec = ScenarioSpec::load(o.scenario);
    spec.N_grid = {o.N};
    scenario.emplace(spec);
    data = generate_dataset(*scenario, o.N, o.seed);
    config = scenario->config();
    frame = scenario->frame();
  } else if (!o.data.empty()) {
    data = dataset_from_csv(read_file(o.data));
    const int J = std::max(resolution_level(data.size(), config), resolution_level(std::max<std::size_t>(data.size() / 2, 8), config));
    frame = std::make_shared<const NeedletFrame>(config.B, J - 1);
  } else {
    throw ParameterError("estimate: give --data or --scenario");
  }

  std::optional<FunctionEstimate> est;
  if (o.target == "mean") {
    est = estimate_mean(data, frame, config);
  } else if (o.target == "gsquared") {
    est = estimate_gsquared(data, frame, config);
  } else if (o.target == "variance") {
    est = estimate_variance(data, frame, config);
  } else if (o.target == "variance-km") {
    if (!scenario) throw ParameterError("estimate: variance-km needs --scenario (the true mean)");
    est = estimate_variance_known_mean(data, scenario->g_on_grid().cwiseAbs2(), frame, config);
  } else {
    throw ParameterError("estimate: unknown target '" + o.target + "'");
  }

  if (!o.coeffs_out.empty()) write_file(o.coeffs_out, pyramid_to_csv(est->coefficients()));
  std::vector<Direction> points;
  if (o.eval_points > 0) {
    points = sample_uniform(static_cast<std::size_t>(o.eval_points), derive_seed(o.seed, 0xe7a1));
  } else {
    points = frame->finest_grid().nodes;
  }
  const Eigen::VectorXd values = est->evaluate(points);
  output(o.values_out, values_to_csv(points, values));
  if (scenario && o.target != "mean" && o.target != "gsquared") {
    std::fprintf(stderr, "L2 risk vs true variance: %.6g\n", lp_risk(*est, scenario->variance_on_grid(), 2.0));
  }
  return 0;
}

int rate_study_cmd(const std::string& path, const std::string& format, const std::string& out, int threads) {
  ScenarioSpec spec = ScenarioSpec::load(path);
  if (threads > 0) spec.threads = threads;
  const Scenario scenario(spec);
  const RateReport report = run_rate_study(scenario);
  const ReportFormat f = format == "json" ? ReportFormat::json : ReportFormat::csv;
  output(out, render_report(report, f));
  const bool ok = report.verdict == Verdict::pass && report.km_dominates.value_or(true);
  return ok ? 0 : 1;
}

int calibrate_cmd(const std::string& path, const std::vector<double>& kappas, std::size_t N, int reps, int threads) {
  ScenarioSpec spec = ScenarioSpec::load(path);
  spec.N_grid = {N};
  spec.universal_kappa = false;
  if (reps > 0) spec.replicates = reps;
  if (threads > 0) spec.threads = threads;
  std::printf("kappa,mean_risk_p,se\n");
  for (double k : kappas) {
    spec.estimator.kappa_g = spec.estimator.kappa_h = spec.estimator.kappa_v = k;
    const Scenario scenario(spec);
    const RiskSample rs = replicate_risks(scenario, 0, spec.replicates, spec.threads);
    double m = 0.0, ss = 0.0;
    const double n = static_cast<double>(rs.risk_p.size());
    for (double r : rs.risk_p) m += r / n;
    for (double r : rs.risk_p) ss += (r - m) * (r - m);
    std::printf("%.17g,%.17g,%.17g\n", k, m, n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Needlet estimation of variance functions on the sphere"};
  app.require_subcommand(1);

  double B = 2.0;
  int j_max = 5, resolution = Window::kDefaultResolution;
  auto* info = app.add_subcommand("frame-info", "Print band limits, cubature sizes and window checks");
  info->add_option("--B", B, "Dilation base")->check(CLI::PositiveNumber);
  info->add_option("--j-max", j_max, "Finest scale");
  info->add_option("--grid-resolution", resolution, "Window tabulation points");

  std::string spec_path, format = "csv", out;
  auto* an = app.add_subcommand("analyze", "Needlet coefficients of a function spec (JSON)");
  an->add_option("function", spec_path, "Function spec JSON file")->required();
  an->add_option("--B", B, "Dilation base");
  an->add_option("--j-max", j_max, "Finest scale");
  an->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  an->add_option("-o,--out", out, "Output file (default stdout)");

  EstimateOptions eo;
  auto* es = app.add_subcommand("estimate", "Estimate from a dataset CSV or a synthetic scenario");
  es->add_option("--data", eo.data, "Dataset CSV (theta,phi,y)");
  es->add_option("--scenario", eo.scenario, "Scenario JSON used to simulate one dataset");
  es->add_option("--N", eo.N, "Sample size when simulating");
  es->add_option("--seed", eo.seed, "Simulation seed");
  es->add_option("--target", eo.target, "mean | gsquared | variance | variance-km")
      ->check(CLI::IsMember({"mean", "gsquared", "variance", "variance-km"}));
  es->add_option("--B", eo.B, "Dilation base (dataset input)");
  es->add_option("--kappa-g", eo.kappa_g, "Threshold constant for g (dataset input)");
  es->add_option("--kappa-h", eo.kappa_h, "Threshold constant for h (dataset input)");
  es->add_option("--kappa-v", eo.kappa_v, "Threshold constant for the known-mean variant");
  es->add_option("--coeffs", eo.coeffs_out, "Write the estimate's needlet coefficients (CSV)");
  es->add_option("-o,--out", eo.values_out, "Sampled values CSV (default stdout)");
  es->add_option("--eval-points", eo.eval_points, "Evaluate at this many uniform points instead of the finest grid");

  std::string scenario_path;
  int threads = 0;
  auto* rs = app.add_subcommand("rate-study", "Replicated risk study with slope verdict");
  rs->add_option("scenario", scenario_path, "Scenario JSON")->required();
  rs->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  rs->add_option("-o,--out", out, "Report file (default stdout)");
  rs->add_option("--threads", threads, "Worker threads (overrides the scenario)");

  std::vector<double> kappas{0.5, 1, 2, 4, 8, 16};
  std::size_t cal_N = 4096;
  int reps = 0;
  auto* cal = app.add_subcommand("calibrate-kappa", "Sweep kappa and report mean risk at one N");
  cal->add_option("scenario", scenario_path, "Scenario JSON")->required();
  cal->add_option("--kappas", kappas, "Kappa values")->delimiter(',');
  cal->add_option("--N", cal_N, "Sample size");
  cal->add_option("--replicates", reps, "Replicates (default: scenario)");
  cal->add_option("--threads", threads, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*info) return frame_info(B, j_max, resolution);
    if (*an) return analyze_cmd(spec_path, B, j_max, format, out);
    if (*es) return estimate_cmd(eo);
    if (*rs) return rate_study_cmd(scenario_path, format, out, threads);
    if (*cal) return calibrate_cmd(scenario_path, kappas, cal_N, reps, threads);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
