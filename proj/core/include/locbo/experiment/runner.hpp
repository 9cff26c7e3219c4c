#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "locbo/experiment/spec.hpp"
#include "locbo/opt/run.hpp"

namespace locbo::experiment {

inline constexpr const char* kCodeVersion = "locbo 0.1.0";

struct TrialResult {
  std::string label;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";  // or the error message
  std::optional<opt::Trace> trace;
};

/// Per-(method, round) aggregate: mean and symmetric 15th-85th percentile
/// band of the metric across trials, plus per-trial terminal values.
struct Summary {
  struct Row {
    std::string label;
    int round = 0;  // 1-based, init phase included
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
  };
  std::vector<Row> rows;
  std::map<std::string, std::vector<double>> terminal;  // label -> per-trial final metric

  void write_csv(std::ostream& os) const;
};

/// Linear-interpolation percentile of a sample, p in [0, 1].
double percentile(std::vector<double> values, double p);

/// Metric series for one run: the simple-regret series when the problem has
/// a known optimum, otherwise the objective value of the running incumbent.
std::vector<double> metric_series(const problems::Problem& problem, const opt::Trace& trace);

Summary summarize(const problems::Problem& problem, const std::vector<TrialResult>& results);

struct ExperimentOutput {
  Summary summary;
  std::vector<TrialResult> trials;
  std::string out_dir;  // resolved (LOCBO_OUT respected)
};

/// Runs n_trials x |methods| independent runs in parallel, persists one
/// trace CSV + JSON per trial plus summary.csv and manifest.json. Refuses
/// to overwrite an existing manifest unless force is set. A failing trial
/// is recorded and the rest proceed.
ExperimentOutput run_experiment(const ExperimentSpec& spec, bool force = false,
                                int n_threads = 0);

struct AuditRow {
  std::string label;
  int trial = 0;
  int rounds = 0;
  double y_miss_rate = 0.0;
  double y_coverage_bound = 0.0;
  bool bound_ok = false;
  double f_miss_rate = std::numeric_limits<double>::quiet_NaN();
  double f_coverage_bound = std::numeric_limits<double>::quiet_NaN();
  double b_xi = std::numeric_limits<double>::quiet_NaN();
};

/// Coverage table recomputed from a persisted results directory: empirical
/// noisy-observation miscoverage against the long-run bound, and (when the
/// objective is evaluable exactly) the objective-value miscoverage against
/// the noise-adjusted bound with b_xi = 0.5 for Gaussian noise.
std::vector<AuditRow> audit_report(const std::string& results_dir);

std::string audit_table(const std::vector<AuditRow>& rows);

/// Recomputes the summary from the persisted trace CSVs (no in-memory
/// traces), for verifying the persisted summary.
Summary summarize_from_dir(const std::string& results_dir);

}  // namespace locbo::experiment
