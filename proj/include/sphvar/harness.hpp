#pragma once

#include "sphvar/rates.hpp"
#include "sphvar/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sphvar {

/// ||estimate - truth||_p on the frame's finest grid (p = inf: grid max).
double lp_risk(const FunctionEstimate& estimate, const Eigen::VectorXd& truth_on_finest_grid, double p);
double lp_risk(const FunctionEstimate& estimate, const PointFunction& truth, double p);

/// Ordinary least-squares slope and intercept of y on x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

enum class Verdict { pass, fail, degenerate };
std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& s);

struct RatePoint {
  std::size_t N = 0;
  double mean_risk_p = 0.0;  // mean of ||V_hat - V||_p^p
  double se = 0.0;
  int n_reps = 0;
  std::optional<double> km_mean_risk_p;  // known-mean estimator, same datasets
  std::optional<double> km_se;

  bool operator==(const RatePoint&) const = default;
};

struct RateReport {
  std::vector<RatePoint> points;
  double slope = 0.0;       // against ln(N / ln N)
  double slope_log_n = 0.0;  // against ln N
  double theory = 0.0;       // -p R
  double tolerance = 0.0;
  std::string regime;
  Verdict verdict = Verdict::degenerate;
  std::optional<bool> km_dominates;  // km risk <= risk at every N

  bool operator==(const RateReport&) const = default;
};

/// Replicated risks per N with replicate seeds derive_seed(derive_seed(seed,
/// N index), replicate). Replicates run on `spec.threads` workers; the
/// reduction is in replicate order so results do not depend on the thread
/// count. Throws ScenarioError with fewer than 3 sample sizes.
RateReport run_rate_study(const Scenario& scenario);

/// Mean and standard error of p-risks for one N (exposed for the CLI and
/// tests; same seeds as run_rate_study).
struct RiskSample {
  std::vector<double> risk_p;
  std::vector<double> km_risk_p;
};
RiskSample replicate_risks(const Scenario& scenario, std::size_t n_index, int replicates, int threads);

enum class ReportFormat { csv, json };

/// Deterministic rendering. CSV numbers use %.17g; JSON numbers are written
/// in shortest round-trip form.
std::string render_report(const RateReport& report, ReportFormat format);
/// Writes render_report to `path`; IoError names the path on failure.
void emit_report(const RateReport& report, ReportFormat format, const std::string& path);
/// Inverse of the JSON rendering.
RateReport parse_report_json(const std::string& text);

}  // namespace sphvar
