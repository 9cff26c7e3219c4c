#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "locbo/math/rng.hpp"
#include "locbo/rrm/layout.hpp"

namespace locbo::problems {
struct Problem;
}

namespace locbo::rrm {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

inline constexpr double kPowerLoDbm = 6.0;
inline constexpr double kPowerHiDbm = 46.0;
inline constexpr double kTiltLoDeg = -90.0;
inline constexpr double kTiltHiDeg = 90.0;
inline constexpr double kDefaultNoiseDbm = -104.0;  // 10 MHz thermal + 7 dB NF

struct RadioConfig {
  Eigen::VectorXd powers_dbm;  // 9
  Eigen::VectorXd tilts_deg;   // 9
  double noise_watts = 0.0;
  double lambda_gu = 0.7;

  static RadioConfig uniform(const NetworkLayout& layout, double power_dbm, double tilt_deg);
  void validate(const NetworkLayout& layout) const;
};

/// Large-scale linear power gain between BS b and user k: log-distance path
/// loss, frozen shadow fading, and the sector antenna pattern steered by the
/// tilt. Deterministic given the layout.
double large_scale_gain(const NetworkLayout& layout, int bs_index, int user_index,
                        double tilt_deg);

/// Achievable rate of user k in bits/s/Hz given per-BS complex channel gains.
double user_rate(const NetworkLayout& layout, const RadioConfig& config, int user_index,
                 const Eigen::VectorXcd& h);

/// Monte-Carlo estimate of the weighted average capacity over Rayleigh
/// fading. Deterministic for a fixed seed.
double capacity_objective(const NetworkLayout& layout, const RadioConfig& config,
                          int n_mc_channels, std::uint64_t seed);

/// Empirical average over n_ch channel draws: the noisy observation oracle.
double noisy_observe(const NetworkLayout& layout, const RadioConfig& config, int n_ch,
                     math::Rng& rng);

/// Weighted sum of per-user rates with all |h|^2 = 1 (no fading); used by
/// geometry tests.
double fixed_channel_capacity(const NetworkLayout& layout, const RadioConfig& config);

/// Mapping between the optimizer's unit cube and physical (power, tilt)
/// pairs, two coordinates per BS.
RadioConfig config_from_unit(const NetworkLayout& layout, const Eigen::VectorXd& x,
                             double lambda_gu = 0.7, double noise_watts = dbm_to_watts(kDefaultNoiseDbm));
Eigen::VectorXd unit_from_config(const RadioConfig& config);

struct RrmOptions {
  std::uint64_t layout_seed = 7;
  int n_ch = 1;                 // channel draws per observation
  double lambda_gu = 0.7;
  double noise_dbm = kDefaultNoiseDbm;
  int eval_channels = 10'000;   // ground-truth capacity draws
  std::uint64_t eval_seed = 99;
};

/// Problem registered as "rrm-uav": 18-dimensional unit box (9 power/tilt
/// pairs) with block-coordinate structure, noisy empirical observations,
/// and the large-sample capacity estimate as reporting objective.
problems::Problem make_rrm_problem(const RrmOptions& opts = {});

}  // namespace locbo::rrm
