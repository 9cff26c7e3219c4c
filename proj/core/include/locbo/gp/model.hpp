#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "locbo/gp/kernel.hpp"

namespace locbo::gp {

/// Ordered (input, observation) pairs. Inputs are rows of a t x d matrix.
struct Dataset {
  Eigen::MatrixXd inputs;        // t x d
  Eigen::VectorXd observations;  // t

  Dataset() : inputs(0, 0), observations(0) {}
  Dataset(Eigen::MatrixXd x, Eigen::VectorXd y)
      : inputs(std::move(x)), observations(std::move(y)) {
    if (inputs.rows() != observations.size())
      throw std::invalid_argument("Dataset: inputs/observations length mismatch");
  }

  Eigen::Index size() const { return observations.size(); }
  Eigen::Index dim() const { return inputs.cols(); }
  bool empty() const { return size() == 0; }

  void add(const Eigen::VectorXd& x, double y) {
    if (!empty() && x.size() != dim())
      throw std::invalid_argument("Dataset: dimension mismatch");
    inputs.conservativeResize(inputs.rows() + 1, empty() ? x.size() : dim());
    inputs.row(inputs.rows() - 1) = x.transpose();
    observations.conservativeResize(observations.size() + 1);
    observations(observations.size() - 1) = y;
  }

  double mean_observation() const {
    return empty() ? 0.0 : observations.mean();
  }
};

struct PredictiveNormal {
  double mean = 0.0;
  double variance = 0.0;
};

/// Coefficients of the one-point conditioning map: the posterior of f(x)
/// given the current data plus a hypothetical observation (x, y') is
/// Normal(a*y' + b, var_plus) for every y'.
struct ConditionCoeffs {
  double a = 0.0;
  double b = 0.0;
  double var_plus = 0.0;
};

class FactorizationError : public std::runtime_error {
 public:
  explicit FactorizationError(const std::string& what) : std::runtime_error(what) {}
};

/// Exact Gaussian-process regression with a cached Cholesky factorization
/// of K(X) + sigma^2 I. Immutable after construction; posterior queries are
/// safe to run concurrently.
class GpModel {
 public:
  /// `mean_offset` is subtracted from observations before conditioning and
  /// added back on prediction (a constant prior mean).
  GpModel(KernelParams params, Dataset data, double mean_offset = 0.0);

  /// Convenience constructor centering on the running mean of y.
  static GpModel with_centered_mean(KernelParams params, Dataset data);

  const KernelParams& params() const { return params_; }
  const Dataset& data() const { return data_; }
  double mean_offset() const { return mean_offset_; }
  double applied_jitter() const { return jitter_; }

  /// Posterior over the latent f(x); variance clamped at zero.
  PredictiveNormal posterior(const Eigen::VectorXd& x) const;

  /// Distribution of a new observation y at x: same mean, variance plus
  /// the observation noise.
  PredictiveNormal predictive_observation(const Eigen::VectorXd& x) const;

  ConditionCoeffs condition_one_point(const Eigen::VectorXd& x) const;

  /// Same coefficients from an already-computed posterior at x.
  static ConditionCoeffs condition_from(const PredictiveNormal& f_posterior,
                                        double noise_variance);

  double log_marginal_likelihood() const;

  /// Max relative Frobenius error between L L^T and K + sigma^2 I.
  double factorization_residual() const;

 private:
  Eigen::VectorXd kernel_vector(const Eigen::VectorXd& x) const;

  KernelParams params_;
  Dataset data_;
  double mean_offset_ = 0.0;
  double jitter_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;  // (K + sigma^2 I)^{-1} (y - offset)
  Eigen::MatrixXd kmat_;   // K + sigma^2 I (before jitter)
};

}  // namespace locbo::gp
