#include "locbo/conformal/score.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "locbo/math/normal.hpp"

namespace locbo::conformal {

double nc_score(const gp::PredictiveNormal& pred, double y) {
  if (!(pred.variance > 0.0))
    throw std::invalid_argument("nc_score: predictive variance must be positive");
  const double z = std::fabs(y - pred.mean) / std::sqrt(pred.variance);
  return 2.0 * math::norm_ccdf(z);
}

PredictionInterval interval(const gp::PredictiveNormal& pred, double lambda) {
  if (!(pred.variance > 0.0))
    throw std::invalid_argument("interval: predictive variance must be positive");
  const double lam = std::clamp(lambda, kLambdaMin, 2.0 - kLambdaMin);
  const double sigma = std::sqrt(pred.variance);
  const double half = std::max(0.0, math::norm_cquantile(0.5 * lam)) * sigma;
  return {pred.mean - half, pred.mean + half, lam};
}

}  // namespace locbo::conformal
