#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <limits>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "locbo/opt/config.hpp"

namespace locbo::opt {

/// One optimization round. Conformal fields are NaN (covered = -1) for the
/// initial random phase and for methods without calibration state.
struct TraceRow {
  int t = 0;              // 1-based global round index (init phase included)
  Eigen::VectorXd x;
  double y = 0.0;
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();
  int covered = -1;       // 1 covered, 0 miscovered, -1 not applicable
  double acq = std::numeric_limits<double>::quiet_NaN();
  double incumbent = 0.0;  // running max of observed y
  double regret = std::numeric_limits<double>::quiet_NaN();
};

/// Full record of one optimization run.
struct Trace {
  std::string problem;
  BoConfig config;
  int n_init = 0;
  std::vector<TraceRow> rows;
  Eigen::VectorXd x_hat;  // query of the best observed y
  double y_best = 0.0;
  std::string conformal_state;  // final calibration state snapshot (JSON text)

  int dim() const { return rows.empty() ? 0 : static_cast<int>(rows.front().x.size()); }

  static std::string csv_header(int dim);
  void write_csv(std::ostream& os) const;
  nlohmann::json to_json() const;
};

/// Deterministic float formatting used by every persisted artifact
/// (17 significant digits round-trips doubles exactly).
std::string format_double(double v);

}  // namespace locbo::opt
