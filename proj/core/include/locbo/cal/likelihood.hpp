#pragma once

#include "locbo/conformal/score.hpp"
#include "locbo/gp/model.hpp"
#include "locbo/math/rng.hpp"

namespace locbo::cal {

/// Piecewise observation density: uniform mass (1 - alpha) on the conformal
/// interval, reweighted Gaussian tails outside. The tail divisor is the
/// base-Gaussian mass outside the interval, which keeps the density exactly
/// normalized for every threshold, including the clamped and degenerate
/// regimes.
class CalibratedLikelihood {
 public:
  /// Direct construction from an already-built interval. Throws on a
  /// degenerate interval; use from_threshold for the widened fallback.
  CalibratedLikelihood(conformal::PredictionInterval interval, double alpha,
                       gp::PredictiveNormal base);

  /// Build from a raw threshold value: clamps lambda, builds the centered
  /// interval, and widens degenerate intervals to 1e-6 * sigma~.
  static CalibratedLikelihood from_threshold(const gp::PredictiveNormal& pred,
                                             double lambda, double alpha);

  double pdf(double y) const;
  double sample(math::Rng& rng) const;

  /// Inverse c.d.f. of the piecewise density, u in (0, 1).
  double quantile(double u) const;

  const conformal::PredictionInterval& interval() const { return interval_; }
  double alpha() const { return alpha_; }
  /// Base-Gaussian mass outside the interval (the tail divisor).
  double lambda_at_x() const { return lambda_at_x_; }
  const gp::PredictiveNormal& base() const { return base_; }

 private:
  conformal::PredictionInterval interval_;
  double alpha_ = 0.0;
  gp::PredictiveNormal base_;
  double lambda_at_x_ = 0.0;
  double sigma_ = 0.0;
};

}  // namespace locbo::cal
