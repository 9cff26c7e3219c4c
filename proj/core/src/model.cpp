#include "locbo/gp/model.hpp"

#include <algorithm>
#include <cmath>

namespace locbo::gp {

GpModel::GpModel(KernelParams params, Dataset data, double mean_offset)
    : params_(std::move(params)), data_(std::move(data)), mean_offset_(mean_offset) {
  params_.validate();
  const Eigen::Index t = data_.size();
  if (t == 0) return;

  kmat_.resize(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double k = matern52(data_.inputs.row(i), data_.inputs.row(j), params_);
      kmat_(i, j) = k;
      kmat_(j, i) = k;
    }
    kmat_(i, i) += params_.noise_variance;
  }

  // Jitter ladder for borderline-conditioned matrices.
  const double jitters[] = {0.0, 1e-10, 1e-8, 1e-6};
  for (double j : jitters) {
    Eigen::MatrixXd m = kmat_;
    if (j > 0.0) m.diagonal().array() += j;
    llt_.compute(m);
    if (llt_.info() == Eigen::Success) {
      jitter_ = j;
      alpha_ = llt_.solve((data_.observations.array() - mean_offset_).matrix());
      return;
    }
  }
  throw FactorizationError(
      "GpModel: K + sigma^2 I is not positive definite after jitter escalation "
      "(up to 1e-6); the conditioning data is degenerate for these hyperparameters");
}

GpModel GpModel::with_centered_mean(KernelParams params, Dataset data) {
  const double offset = data.mean_observation();
  return GpModel(std::move(params), std::move(data), offset);
}

Eigen::VectorXd GpModel::kernel_vector(const Eigen::VectorXd& x) const {
  Eigen::VectorXd k(data_.size());
  for (Eigen::Index i = 0; i < data_.size(); ++i)
    k(i) = matern52(data_.inputs.row(i), x, params_);
  return k;
}

PredictiveNormal GpModel::posterior(const Eigen::VectorXd& x) const {
  const double prior_var = matern52(x, x, params_);
  if (data_.empty()) return {mean_offset_, prior_var};

  const Eigen::VectorXd k = kernel_vector(x);
  const double mean = k.dot(alpha_) + mean_offset_;
  const Eigen::VectorXd v = llt_.matrixL().solve(k);
  const double var = std::max(0.0, prior_var - v.squaredNorm());
  return {mean, var};
}

PredictiveNormal GpModel::predictive_observation(const Eigen::VectorXd& x) const {
  PredictiveNormal p = posterior(x);
  p.variance += params_.noise_variance;
  return p;
}

ConditionCoeffs GpModel::condition_one_point(const Eigen::VectorXd& x) const {
  return condition_from(posterior(x), params_.noise_variance);
}

ConditionCoeffs GpModel::condition_from(const PredictiveNormal& f_posterior,
                                        double noise_variance) {
  // Block-inverse identities for appending one row/column to the Gram
  // matrix: with s2 = posterior variance at x and n2 = noise variance,
  //   a        = s2 / (s2 + n2)
  //   b        = (1 - a) * posterior mean at x
  //   var_plus = (1 - a) * s2
  const double a =
      std::max(f_posterior.variance / (f_posterior.variance + noise_variance), 1e-12);
  ConditionCoeffs c;
  c.a = a;
  c.b = (1.0 - a) * f_posterior.mean;
  c.var_plus = std::max((1.0 - a) * f_posterior.variance,
                        1e-15 * (f_posterior.variance + noise_variance));
  return c;
}

double GpModel::log_marginal_likelihood() const {
  const Eigen::Index t = data_.size();
  if (t == 0) return 0.0;
  const Eigen::VectorXd r = data_.observations.array() - mean_offset_;
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < t; ++i)
    logdet += std::log(llt_.matrixLLT()(i, i));
  return -0.5 * r.dot(alpha_) - logdet -
         0.5 * static_cast<double>(t) * std::log(2.0 * M_PI);
}

double GpModel::factorization_residual() const {
  if (data_.empty()) return 0.0;
  Eigen::MatrixXd m = kmat_;
  m.diagonal().array() += jitter_;
  const Eigen::MatrixXd l = llt_.matrixL();
  return (l * l.transpose() - m).norm() / m.norm();
}

}  // namespace locbo::gp
