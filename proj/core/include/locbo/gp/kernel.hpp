#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace locbo::gp {

/// Matern-5/2 kernel hyperparameters plus the Gaussian observation noise.
struct KernelParams {
  double length_scale = 1.0;
  double noise_variance = 1e-2;
  double output_scale = 1.0;

  void validate() const {
    if (!(length_scale > 0.0) || !std::isfinite(length_scale))
      throw std::invalid_argument("length_scale must be positive");
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
      throw std::invalid_argument("noise_variance must be positive");
    if (!(output_scale > 0.0) || !std::isfinite(output_scale))
      throw std::invalid_argument("output_scale must be positive");
  }
};

/// Matern-5/2 covariance between two points.
inline double matern52(const Eigen::VectorXd& x, const Eigen::VectorXd& x2,
                       const KernelParams& params) {
  params.validate();
  if (!x.allFinite() || !x2.allFinite())
    throw std::invalid_argument("matern52: non-finite input");
  if (x.size() != x2.size())
    throw std::invalid_argument("matern52: dimension mismatch");
  const double r = (x - x2).norm();
  const double s = std::sqrt(5.0) * r / params.length_scale;
  return params.output_scale * (1.0 + s + s * s / 3.0) * std::exp(-s);
}

}  // namespace locbo::gp
