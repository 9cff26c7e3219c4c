#include "locbo/cal/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "locbo/math/normal.hpp"

namespace locbo::cal {

namespace {
constexpr double kDegenerateWidthFactor = 1e-6;
}

CalibratedLikelihood::CalibratedLikelihood(conformal::PredictionInterval interval,
                                           double alpha, gp::PredictiveNormal base)
    : interval_(interval), alpha_(alpha), base_(base) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("CalibratedLikelihood: alpha must lie in [0,1]");
  if (!(base.variance > 0.0))
    throw std::invalid_argument("CalibratedLikelihood: base variance must be positive");
  sigma_ = std::sqrt(base.variance);
  if (!(interval_.upper > interval_.lower))
    throw std::invalid_argument(
        "CalibratedLikelihood: degenerate interval; build via from_threshold, "
        "which widens it to 1e-6 * sigma~");

  const double zl = (interval_.lower - base_.mean) / sigma_;
  const double zu = (interval_.upper - base_.mean) / sigma_;
  lambda_at_x_ = math::norm_cdf(zl) + math::norm_ccdf(zu);
}

CalibratedLikelihood CalibratedLikelihood::from_threshold(const gp::PredictiveNormal& pred,
                                                          double lambda, double alpha) {
  conformal::PredictionInterval iv = conformal::interval(pred, lambda);
  const double min_half = 0.5 * kDegenerateWidthFactor * std::sqrt(pred.variance);
  if (iv.half_width() < min_half) {
    iv.lower = pred.mean - min_half;
    iv.upper = pred.mean + min_half;
  }
  return CalibratedLikelihood(iv, alpha, pred);
}

double CalibratedLikelihood::pdf(double y) const {
  if (interval_.contains(y)) return (1.0 - alpha_) / (interval_.upper - interval_.lower);
  return alpha_ * math::gauss_pdf(y, base_.mean, base_.variance) / lambda_at_x_;
}

double CalibratedLikelihood::quantile(double u) const {
  const double p_lo = math::norm_cdf((interval_.lower - base_.mean) / sigma_);
  const double mass_lo = alpha_ * p_lo / lambda_at_x_;
  const double mass_inside = 1.0 - alpha_;
  if (u < mass_lo)
    return base_.mean + sigma_ * math::norm_quantile(u * lambda_at_x_ / alpha_);
  if (mass_inside > 0.0 && u < mass_lo + mass_inside)
    return interval_.lower + (interval_.upper - interval_.lower) * (u - mass_lo) / mass_inside;
  return base_.mean +
         sigma_ * math::norm_quantile(1.0 - (1.0 - u) * lambda_at_x_ / alpha_);
}

double CalibratedLikelihood::sample(math::Rng& rng) const {
  if (rng.uniform() < 1.0 - alpha_)
    return rng.uniform(interval_.lower, interval_.upper);

  // Tail draw: pick the side proportionally to its mass, then invert the
  // Gaussian c.d.f. restricted to that tail.
  const double p_lo = math::norm_cdf((interval_.lower - base_.mean) / sigma_);
  const double p_hi = math::norm_ccdf((interval_.upper - base_.mean) / sigma_);
  const double u_side = rng.uniform() * (p_lo + p_hi);
  const double u = rng.uniform_open();
  if (u_side < p_lo)
    return base_.mean + sigma_ * math::norm_quantile(u * p_lo);
  return base_.mean + sigma_ * math::norm_quantile(1.0 - u * p_hi);
}

}  // namespace locbo::cal
