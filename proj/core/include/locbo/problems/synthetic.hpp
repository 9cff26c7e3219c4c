#pragma once

#include <Eigen/Dense>

namespace locbo::problems {

/// Two-dimensional Ackley surface on [-10, 10]^2, flipped so the global
/// maximum is 0 at the origin. Throws on out-of-box input.
double ackley2d(const Eigen::VectorXd& x);

/// x*sin(2x) + cos(pi*x) on [-5, 5]. Throws on out-of-box input.
double synthetic1d(double x);

/// Heteroscedastic noise variance (||x|| + 10) / 20 for the Ackley box.
double hetero_noise_ackley(const Eigen::VectorXd& x);

/// Heteroscedastic noise variance (|x| + 1) / 10 on [-5, 5].
double hetero_noise_1d(double x);

// Global maximizer of synthetic1d, located by a 1e6-point grid scan plus
// golden-section refinement (the surface is even; -x* attains the same value).
inline constexpr double kSynthetic1dArgmax = 3.9933485139344693;
inline constexpr double kSynthetic1dMax = 4.9580136099433982;

}  // namespace locbo::problems
