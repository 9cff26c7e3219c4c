#pragma once

#include "locbo/gp/model.hpp"

namespace locbo::conformal {

/// Clamp range applied to thresholds before inverting the normal tail.
inline constexpr double kLambdaMin = 1e-6;

/// Non-conformity score 2*Q(|y - mu| / sigma~). Takes its maximum value 1
/// at y = mu and decreases monotonically with |y - mu|.
double nc_score(const gp::PredictiveNormal& pred, double y);

struct PredictionInterval {
  double lower = 0.0;
  double upper = 0.0;
  double threshold = 0.0;  // effective (clamped) threshold used to build it

  double center() const { return 0.5 * (lower + upper); }
  double half_width() const { return 0.5 * (upper - lower); }
  bool contains(double y) const { return lower <= y && y <= upper; }
};

/// Interval centered at the predictive mean with half-width
/// Q^{-1}(lambda_eff / 2) * sigma~, where lambda_eff clamps lambda into
/// [kLambdaMin, 2 - kLambdaMin]. Thresholds >= 1 give the degenerate
/// interval [mu, mu].
PredictionInterval interval(const gp::PredictiveNormal& pred, double lambda);

}  // namespace locbo::conformal
