#pragma once

#include <cmath>

namespace locbo::math {

inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density.
inline double norm_pdf(double z) {
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

/// Standard normal c.d.f., stable in both tails.
inline double norm_cdf(double z) {
  return 0.5 * std::erfc(-z / kSqrt2);
}

/// Complementary c.d.f. Q(z) = Pr[Z > z].
inline double norm_ccdf(double z) {
  return 0.5 * std::erfc(z / kSqrt2);
}

/// Inverse of the standard normal c.d.f.
double norm_quantile(double p);

/// Inverse of the complementary c.d.f.: Q^{-1}(p).
inline double norm_cquantile(double p) {
  return -norm_quantile(p);
}

inline double gauss_pdf(double x, double mean, double variance) {
  const double s = std::sqrt(variance);
  return norm_pdf((x - mean) / s) / s;
}

inline double gauss_cdf(double x, double mean, double variance) {
  return norm_cdf((x - mean) / std::sqrt(variance));
}

}  // namespace locbo::math
