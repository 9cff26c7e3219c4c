#pragma once

#include <Eigen/Dense>
#include <limits>
#include <nlohmann/json_fwd.hpp>
#include <vector>

namespace locbo::conformal {

/// RBF localization kernel kappa * exp(-||x - x'||^2 / l^2). kappa = 0 or
/// l = +inf reduces localized CP to the scalar online rule.
struct LocKernelParams {
  double kappa = 0.0;
  double length = std::numeric_limits<double>::infinity();

  double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& x2) const;
  void validate() const;
};

/// Learning-rate schedule eta_t = eta1 * t^-decay.
struct StepSchedule {
  double eta1 = 5e-3;
  double decay = 5e-2;

  double rate(int t) const;
};

/// Localized CP threshold function lambda_t(x) = g_t(x) + c_t, where g_t is
/// a kernel expansion over past query points. Value semantics: updates
/// return a new state.
class ThresholdFunction {
 public:
  ThresholdFunction() = default;
  ThresholdFunction(double c0, LocKernelParams kernel, double reg_lambda,
                    StepSchedule schedule);

  double c() const { return c_; }
  const std::vector<Eigen::VectorXd>& centers() const { return centers_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const LocKernelParams& kernel() const { return kernel_; }
  double reg_lambda() const { return reg_lambda_; }
  const StepSchedule& schedule() const { return schedule_; }
  int rounds() const { return rounds_; }

  double eval(const Eigen::VectorXd& x) const;

  /// Online update after observing coverage at round t >= 1:
  ///   c      += eta_t * (alpha - miss)
  ///   coeffs *= (1 - reg_lambda * eta_t), then append eta_t * (alpha - miss)
  /// with miss = 1 if not covered. Throws if eta_t >= 1 / reg_lambda.
  ThresholdFunction updated(const Eigen::VectorXd& x_t, bool covered, int t,
                            double alpha) const;

  nlohmann::json to_json() const;
  static ThresholdFunction from_json(const nlohmann::json& j);

 private:
  double c_ = 0.0;
  std::vector<Eigen::VectorXd> centers_;
  std::vector<double> coeffs_;
  LocKernelParams kernel_;
  double reg_lambda_ = 0.0;
  StepSchedule schedule_;
  int rounds_ = 0;
};

/// Free-function spelling of ThresholdFunction::updated.
ThresholdFunction locp_update(const ThresholdFunction& tf, const Eigen::VectorXd& x_t,
                              bool covered, int t, double alpha);

}  // namespace locbo::conformal
