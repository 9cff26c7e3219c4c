#include "locbo/conformal/recalibrator.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace locbo::conformal {

namespace {

void check_levels(const std::vector<double>& levels) {
  if (levels.empty()) throw std::invalid_argument("recalibrator: empty level grid");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 0.0 || levels[i] > 1.0)
      throw std::invalid_argument("recalibrator: levels must lie in [0,1]");
    if (i > 0 && levels[i] <= levels[i - 1])
      throw std::invalid_argument("recalibrator: levels must be strictly increasing");
  }
}

std::vector<double> grid(int m, double lo, double hi) {
  if (m < 2) throw std::invalid_argument("recalibrator: grid needs at least 2 levels");
  std::vector<double> levels(m);
  for (int i = 0; i < m; ++i)
    levels[i] = lo + (hi - lo) * static_cast<double>(i) / (m - 1);
  return levels;
}

// Piecewise-linear interpolation with edge clamping.
double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

}  // namespace

Recalibrator::Recalibrator(std::vector<double> levels, StepSchedule schedule)
    : levels_(std::move(levels)), schedule_(schedule) {
  check_levels(levels_);
  values_ = levels_;
}

Recalibrator Recalibrator::uniform_grid(int m, double lo, double hi, StepSchedule schedule) {
  return Recalibrator(grid(m, lo, hi), schedule);
}

double Recalibrator::value_at(double alpha) const {
  return interp(levels_, values_, alpha);
}

Recalibrator Recalibrator::updated(const std::vector<bool>& covered_per_level, int t) const {
  if (covered_per_level.size() != levels_.size())
    throw std::invalid_argument("Recalibrator: coverage vector length mismatch");
  const double eta = schedule_.rate(t);
  Recalibrator next = *this;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const double miss = covered_per_level[i] ? 0.0 : 1.0;
    next.values_[i] = std::clamp(values_[i] - eta * (levels_[i] - miss), 0.0, 1.0);
  }
  return next;
}

nlohmann::json Recalibrator::to_json() const {
  return {{"levels", levels_},
          {"values", values_},
          {"eta1", schedule_.eta1},
          {"w", schedule_.decay}};
}

LocalizedRecalibrator::LocalizedRecalibrator(std::vector<double> levels,
                                             LocKernelParams kernel, double reg_lambda,
                                             StepSchedule schedule)
    : levels_(std::move(levels)),
      kernel_(kernel),
      reg_lambda_(reg_lambda),
      schedule_(schedule) {
  check_levels(levels_);
  kernel_.validate();
  base_ = levels_;
  coeffs_.resize(levels_.size());
}

LocalizedRecalibrator LocalizedRecalibrator::uniform_grid(int m, double lo, double hi,
                                                          LocKernelParams kernel,
                                                          double reg_lambda,
                                                          StepSchedule schedule) {
  return LocalizedRecalibrator(grid(m, lo, hi), kernel, reg_lambda, schedule);
}

double LocalizedRecalibrator::raw_level_value(std::size_t i, const Eigen::VectorXd& x) const {
  double g = 0.0;
  if (kernel_.kappa != 0.0) {
    for (std::size_t k = 0; k < centers_.size(); ++k)
      g += coeffs_[i][k] * kernel_.eval(centers_[k], x);
  }
  return std::clamp(base_[i] + g, 0.0, 1.0);
}

double LocalizedRecalibrator::value_at(double alpha, const Eigen::VectorXd& x) const {
  std::vector<double> vals(levels_.size());
  for (std::size_t i = 0; i < levels_.size(); ++i) vals[i] = raw_level_value(i, x);
  return interp(levels_, vals, alpha);
}

LocalizedRecalibrator LocalizedRecalibrator::updated(
    const Eigen::VectorXd& x_t, const std::vector<bool>& covered_per_level, int t) const {
  if (covered_per_level.size() != levels_.size())
    throw std::invalid_argument("LocalizedRecalibrator: coverage vector length mismatch");
  const double eta = schedule_.rate(t);
  if (reg_lambda_ > 0.0 && eta >= 1.0 / reg_lambda_)
    throw std::invalid_argument(
        "LocalizedRecalibrator: learning rate must satisfy eta_t < 1/reg_lambda");

  LocalizedRecalibrator next = *this;
  const double shrink = 1.0 - reg_lambda_ * eta;
  next.centers_.push_back(x_t);
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const double miss = covered_per_level[i] ? 0.0 : 1.0;
    const double step = -eta * (levels_[i] - miss);
    next.base_[i] = base_[i] + step;
    for (double& w : next.coeffs_[i]) w *= shrink;
    next.coeffs_[i].push_back(step);
  }
  return next;
}

nlohmann::json LocalizedRecalibrator::to_json() const {
  nlohmann::json centers = nlohmann::json::array();
  for (const auto& c : centers_) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index i = 0; i < c.size(); ++i) row.push_back(c(i));
    centers.push_back(row);
  }
  nlohmann::json j{{"levels", levels_},
                   {"base", base_},
                   {"centers", centers},
                   {"coeffs", coeffs_},
                   {"kappa", kernel_.kappa},
                   {"lambda", reg_lambda_},
                   {"eta1", schedule_.eta1},
                   {"w", schedule_.decay}};
  if (std::isinf(kernel_.length))
    j["l"] = "inf";
  else
    j["l"] = kernel_.length;
  return j;
}

}  // namespace locbo::conformal
