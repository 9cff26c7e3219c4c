#include "locbo/conformal/threshold.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace locbo::conformal {

double LocKernelParams::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& x2) const {
  if (kappa == 0.0) return 0.0;
  if (std::isinf(length)) return kappa;
  const double d2 = (x - x2).squaredNorm();
  return kappa * std::exp(-d2 / (length * length));
}

void LocKernelParams::validate() const {
  if (!(kappa >= 0.0)) throw std::invalid_argument("LocKernelParams: kappa must be >= 0");
  if (!(length > 0.0)) throw std::invalid_argument("LocKernelParams: length must be > 0");
}

double StepSchedule::rate(int t) const {
  if (t < 1) throw std::invalid_argument("StepSchedule: round index must be >= 1");
  return eta1 * std::pow(static_cast<double>(t), -decay);
}

ThresholdFunction::ThresholdFunction(double c0, LocKernelParams kernel,
                                     double reg_lambda, StepSchedule schedule)
    : c_(c0), kernel_(kernel), reg_lambda_(reg_lambda), schedule_(schedule) {
  kernel_.validate();
  if (!(reg_lambda_ >= 0.0))
    throw std::invalid_argument("ThresholdFunction: reg_lambda must be >= 0");
}

double ThresholdFunction::eval(const Eigen::VectorXd& x) const {
  double g = 0.0;
  if (kernel_.kappa != 0.0) {
    for (std::size_t i = 0; i < centers_.size(); ++i)
      g += coeffs_[i] * kernel_.eval(centers_[i], x);
  }
  return g + c_;
}

ThresholdFunction ThresholdFunction::updated(const Eigen::VectorXd& x_t, bool covered,
                                             int t, double alpha) const {
  const double eta = schedule_.rate(t);
  if (reg_lambda_ > 0.0 && eta >= 1.0 / reg_lambda_)
    throw std::invalid_argument(
        "locp_update: learning rate must satisfy eta_t < 1/reg_lambda");

  const double step = eta * (alpha - (covered ? 0.0 : 1.0));
  ThresholdFunction next = *this;
  next.c_ += step;
  const double shrink = 1.0 - reg_lambda_ * eta;
  for (double& w : next.coeffs_) w *= shrink;
  next.centers_.push_back(x_t);
  next.coeffs_.push_back(step);
  next.rounds_ = rounds_ + 1;
  return next;
}

nlohmann::json ThresholdFunction::to_json() const {
  nlohmann::json centers = nlohmann::json::array();
  for (const auto& c : centers_) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index i = 0; i < c.size(); ++i) row.push_back(c(i));
    centers.push_back(row);
  }
  nlohmann::json j{{"c", c_},
                   {"centers", centers},
                   {"coeffs", coeffs_},
                   {"kappa", kernel_.kappa},
                   {"lambda", reg_lambda_},
                   {"eta1", schedule_.eta1},
                   {"w", schedule_.decay},
                   {"t", rounds_}};
  if (std::isinf(kernel_.length))
    j["l"] = "inf";
  else
    j["l"] = kernel_.length;
  return j;
}

ThresholdFunction ThresholdFunction::from_json(const nlohmann::json& j) {
  LocKernelParams kernel;
  kernel.kappa = j.at("kappa").get<double>();
  if (j.at("l").is_string())
    kernel.length = std::numeric_limits<double>::infinity();
  else
    kernel.length = j.at("l").get<double>();
  StepSchedule sched{j.at("eta1").get<double>(), j.at("w").get<double>()};
  ThresholdFunction tf(j.at("c").get<double>(), kernel, j.at("lambda").get<double>(), sched);
  for (const auto& row : j.at("centers")) {
    Eigen::VectorXd c(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) c(static_cast<Eigen::Index>(i)) = row[i];
    tf.centers_.push_back(std::move(c));
  }
  tf.coeffs_ = j.at("coeffs").get<std::vector<double>>();
  if (tf.coeffs_.size() != tf.centers_.size())
    throw std::invalid_argument("ThresholdFunction: centers/coeffs length mismatch");
  tf.rounds_ = j.at("t").get<int>();
  return tf;
}

ThresholdFunction locp_update(const ThresholdFunction& tf, const Eigen::VectorXd& x_t,
                              bool covered, int t, double alpha) {
  return tf.updated(x_t, covered, t, alpha);
}

}  // namespace locbo::conformal
