#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "locbo/conformal/threshold.hpp"

namespace locbo::conformal {

/// Quantile-level recalibrator on a fixed grid, interpolated linearly in
/// between and clamped to the edge values outside. Values live in [0, 1].
class Recalibrator {
 public:
  Recalibrator() = default;
  Recalibrator(std::vector<double> levels, StepSchedule schedule);

  /// M equally spaced levels in [lo, hi], initialized to the identity map.
  static Recalibrator uniform_grid(int m, double lo, double hi, StepSchedule schedule);

  const std::vector<double>& levels() const { return levels_; }
  const std::vector<double>& values() const { return values_; }

  double value_at(double alpha) const;

  /// Online rule, one coverage indicator per grid level:
  ///   R(alpha_i) <- clamp(R(alpha_i) - eta_t * (alpha_i - miss_i), 0, 1).
  Recalibrator updated(const std::vector<bool>& covered_per_level, int t) const;

  nlohmann::json to_json() const;

 private:
  std::vector<double> levels_;
  std::vector<double> values_;
  StepSchedule schedule_;
};

/// Input-dependent variant: each grid level carries a localized threshold
/// (scalar offset plus kernel expansion), updated with the same sign
/// convention as Recalibrator. Evaluations are clamped to [0, 1].
class LocalizedRecalibrator {
 public:
  LocalizedRecalibrator() = default;
  LocalizedRecalibrator(std::vector<double> levels, LocKernelParams kernel,
                        double reg_lambda, StepSchedule schedule);

  static LocalizedRecalibrator uniform_grid(int m, double lo, double hi,
                                            LocKernelParams kernel, double reg_lambda,
                                            StepSchedule schedule);

  const std::vector<double>& levels() const { return levels_; }

  double value_at(double alpha, const Eigen::VectorXd& x) const;

  LocalizedRecalibrator updated(const Eigen::VectorXd& x_t,
                                const std::vector<bool>& covered_per_level, int t) const;

  nlohmann::json to_json() const;

 private:
  double raw_level_value(std::size_t i, const Eigen::VectorXd& x) const;

  std::vector<double> levels_;
  std::vector<double> base_;                  // per-level scalar offsets
  std::vector<Eigen::VectorXd> centers_;      // shared across levels
  std::vector<std::vector<double>> coeffs_;   // per level, aligned with centers_
  LocKernelParams kernel_;
  double reg_lambda_ = 0.0;
  StepSchedule schedule_;
};

}  // namespace locbo::conformal
