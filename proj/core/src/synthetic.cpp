#include "locbo/problems/synthetic.hpp"

#include <cmath>
#include <stdexcept>

namespace locbo::problems {

double ackley2d(const Eigen::VectorXd& x) {
  if (x.size() != 2) throw std::invalid_argument("ackley2d: input must be 2-dimensional");
  if (x.cwiseAbs().maxCoeff() > 10.0)
    throw std::invalid_argument("ackley2d: input outside [-10,10]^2");
  constexpr double a = 20.0;
  constexpr double b = 0.2;
  const double c = 2.0 * M_PI;
  const double rms = std::sqrt(0.5 * x.squaredNorm());
  const double cos_term = 0.5 * (std::cos(c * x(0)) + std::cos(c * x(1)));
  return a * std::exp(-b * rms) + std::exp(cos_term) - a - std::exp(1.0);
}

double synthetic1d(double x) {
  if (std::fabs(x) > 5.0)
    throw std::invalid_argument("synthetic1d: input outside [-5,5]");
  return x * std::sin(2.0 * x) + std::cos(M_PI * x);
}

double hetero_noise_ackley(const Eigen::VectorXd& x) {
  return (x.norm() + 10.0) / 20.0;
}

double hetero_noise_1d(double x) {
  return (std::fabs(x) + 1.0) / 10.0;
}

}  // namespace locbo::problems
