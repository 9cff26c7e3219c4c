#include "locbo/rrm/sim.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "locbo/problems/problem.hpp"

namespace locbo::rrm {

namespace {

double wrap_deg(double deg) {
  while (deg > 180.0) deg -= 360.0;
  while (deg < -180.0) deg += 360.0;
  return deg;
}

// Per-user rates for one channel realization, written into `rates`.
// gains is the (user x bs) large-scale gain matrix, h2 the matching |h|^2
// draws, powers_w the per-BS transmit powers in watts.
void rates_for_draw(const NetworkLayout& layout, const Eigen::MatrixXd& gains,
                    const Eigen::MatrixXd& h2, const Eigen::VectorXd& powers_w,
                    double noise_watts, Eigen::VectorXd& rates) {
  const int n_bs = static_cast<int>(layout.bs.size());
  for (int k = 0; k < layout.n_users(); ++k) {
    const int serving = layout.association[static_cast<std::size_t>(k)];
    double signal = 0.0;
    double interference = 0.0;
    for (int b = 0; b < n_bs; ++b) {
      const double rx = powers_w(b) * gains(k, b) * h2(k, b);
      if (b == serving)
        signal = rx;
      else
        interference += rx;
    }
    rates(k) = std::log2(1.0 + signal / (interference + noise_watts));
  }
}

double weighted_capacity(const NetworkLayout& layout, const Eigen::VectorXd& rates,
                         double lambda_gu) {
  double uav_sum = 0.0, gu_sum = 0.0;
  for (int k = 0; k < layout.n_users(); ++k) {
    if (layout.users[static_cast<std::size_t>(k)].is_uav)
      uav_sum += rates(k);
    else
      gu_sum += rates(k);
  }
  // The weight named after the GUs multiplies the UAV average, matching the
  // objective as written.
  return lambda_gu / layout.n_uav * uav_sum + (1.0 - lambda_gu) / layout.n_gu * gu_sum;
}

Eigen::MatrixXd gain_matrix(const NetworkLayout& layout, const RadioConfig& config) {
  const int n_bs = static_cast<int>(layout.bs.size());
  Eigen::MatrixXd gains(layout.n_users(), n_bs);
  for (int k = 0; k < layout.n_users(); ++k)
    for (int b = 0; b < n_bs; ++b)
      gains(k, b) = large_scale_gain(layout, b, k, config.tilts_deg(b));
  return gains;
}

void draw_h2(Eigen::MatrixXd& h2, math::Rng& rng) {
  // |h|^2 of a unit-power complex Gaussian is Exp(1).
  for (Eigen::Index k = 0; k < h2.rows(); ++k)
    for (Eigen::Index b = 0; b < h2.cols(); ++b)
      h2(k, b) = -std::log(1.0 - rng.uniform());
}

Eigen::VectorXd powers_in_watts(const RadioConfig& config) {
  Eigen::VectorXd w(config.powers_dbm.size());
  for (Eigen::Index b = 0; b < w.size(); ++b) w(b) = dbm_to_watts(config.powers_dbm(b));
  return w;
}

}  // namespace

RadioConfig RadioConfig::uniform(const NetworkLayout& layout, double power_dbm,
                                 double tilt_deg) {
  RadioConfig c;
  const int n_bs = static_cast<int>(layout.bs.size());
  c.powers_dbm = Eigen::VectorXd::Constant(n_bs, power_dbm);
  c.tilts_deg = Eigen::VectorXd::Constant(n_bs, tilt_deg);
  c.noise_watts = dbm_to_watts(kDefaultNoiseDbm);
  return c;
}

void RadioConfig::validate(const NetworkLayout& layout) const {
  const int n_bs = static_cast<int>(layout.bs.size());
  if (powers_dbm.size() != n_bs || tilts_deg.size() != n_bs)
    throw std::invalid_argument("RadioConfig: wrong vector length");
  for (int b = 0; b < n_bs; ++b) {
    if (powers_dbm(b) < kPowerLoDbm || powers_dbm(b) > kPowerHiDbm)
      throw std::invalid_argument("RadioConfig: power outside [6, 46] dBm");
    if (tilts_deg(b) < kTiltLoDeg || tilts_deg(b) > kTiltHiDeg)
      throw std::invalid_argument("RadioConfig: tilt outside [-90, 90] deg");
  }
  if (!(noise_watts > 0.0)) throw std::invalid_argument("RadioConfig: noise must be > 0");
  if (lambda_gu < 0.0 || lambda_gu > 1.0)
    throw std::invalid_argument("RadioConfig: lambda_gu outside [0, 1]");
}

double large_scale_gain(const NetworkLayout& layout, int bs_index, int user_index,
                        double tilt_deg) {
  const auto& c = layout.constants;
  const auto& bs = layout.bs[static_cast<std::size_t>(bs_index)];
  const auto& user = layout.users[static_cast<std::size_t>(user_index)];

  const Eigen::Vector2d d = user.position - bs.position;
  const double horiz = d.norm();
  const double dz = user.height - bs.height;
  const double d3d = std::sqrt(horiz * horiz + dz * dz);
  if (d3d == 0.0) throw std::invalid_argument("large_scale_gain: zero distance");

  const double n = user.is_uav ? c.pathloss_exp_uav : c.pathloss_exp_gu;
  const double pl_db = c.pathloss_ref_db + 10.0 * n * std::log10(std::max(d3d, 1.0));

  const double az_user = std::atan2(d.y(), d.x()) * 180.0 / M_PI;
  const double d_az = wrap_deg(az_user - bs.azimuth_deg);
  const double elev = std::atan2(dz, horiz) * 180.0 / M_PI;
  const double d_el = elev - tilt_deg;
  const double az_term = 12.0 * (d_az / c.horiz_beamwidth_deg) * (d_az / c.horiz_beamwidth_deg);
  const double el_term = 12.0 * (d_el / c.vert_beamwidth_deg) * (d_el / c.vert_beamwidth_deg);
  const double antenna_db =
      c.antenna_gain_max_db - std::min(az_term + el_term, c.front_to_back_db);

  const double shadow = layout.shadow_db(user_index, bs_index);
  return std::pow(10.0, (-pl_db + antenna_db + shadow) / 10.0);
}

double user_rate(const NetworkLayout& layout, const RadioConfig& config, int user_index,
                 const Eigen::VectorXcd& h) {
  const int n_bs = static_cast<int>(layout.bs.size());
  if (h.size() != n_bs) throw std::invalid_argument("user_rate: channel vector length");
  if (!h.allFinite()) throw std::invalid_argument("user_rate: non-finite channel");

  const int serving = layout.association[static_cast<std::size_t>(user_index)];
  double signal = 0.0;
  double interference = 0.0;
  for (int b = 0; b < n_bs; ++b) {
    const double rx = dbm_to_watts(config.powers_dbm(b)) *
                      large_scale_gain(layout, b, user_index, config.tilts_deg(b)) *
                      std::norm(h(b));
    if (b == serving)
      signal = rx;
    else
      interference += rx;
  }
  return std::log2(1.0 + signal / (interference + config.noise_watts));
}

double capacity_objective(const NetworkLayout& layout, const RadioConfig& config,
                          int n_mc_channels, std::uint64_t seed) {
  if (n_mc_channels < 1)
    throw std::invalid_argument("capacity_objective: n_mc_channels must be >= 1");
  config.validate(layout);

  const Eigen::MatrixXd gains = gain_matrix(layout, config);
  const Eigen::VectorXd powers_w = powers_in_watts(config);
  Eigen::MatrixXd h2(layout.n_users(), static_cast<int>(layout.bs.size()));
  Eigen::VectorXd rates(layout.n_users());

  math::Rng rng = math::Rng::substream(seed, {0xca});
  double total = 0.0;
  for (int i = 0; i < n_mc_channels; ++i) {
    draw_h2(h2, rng);
    rates_for_draw(layout, gains, h2, powers_w, config.noise_watts, rates);
    total += weighted_capacity(layout, rates, config.lambda_gu);
  }
  return total / n_mc_channels;
}

double noisy_observe(const NetworkLayout& layout, const RadioConfig& config, int n_ch,
                     math::Rng& rng) {
  if (n_ch < 1) throw std::invalid_argument("noisy_observe: n_ch must be >= 1");
  config.validate(layout);

  const Eigen::MatrixXd gains = gain_matrix(layout, config);
  const Eigen::VectorXd powers_w = powers_in_watts(config);
  Eigen::MatrixXd h2(layout.n_users(), static_cast<int>(layout.bs.size()));
  Eigen::VectorXd rates(layout.n_users());

  double total = 0.0;
  for (int i = 0; i < n_ch; ++i) {
    draw_h2(h2, rng);
    rates_for_draw(layout, gains, h2, powers_w, config.noise_watts, rates);
    total += weighted_capacity(layout, rates, config.lambda_gu);
  }
  return total / n_ch;
}

double fixed_channel_capacity(const NetworkLayout& layout, const RadioConfig& config) {
  config.validate(layout);
  const Eigen::MatrixXd gains = gain_matrix(layout, config);
  const Eigen::VectorXd powers_w = powers_in_watts(config);
  const Eigen::MatrixXd h2 =
      Eigen::MatrixXd::Ones(layout.n_users(), static_cast<int>(layout.bs.size()));
  Eigen::VectorXd rates(layout.n_users());
  rates_for_draw(layout, gains, h2, powers_w, config.noise_watts, rates);
  return weighted_capacity(layout, rates, config.lambda_gu);
}

RadioConfig config_from_unit(const NetworkLayout& layout, const Eigen::VectorXd& x,
                             double lambda_gu, double noise_watts) {
  const int n_bs = static_cast<int>(layout.bs.size());
  if (x.size() != 2 * n_bs)
    throw std::invalid_argument("config_from_unit: expected 2 coordinates per BS");
  RadioConfig c;
  c.powers_dbm.resize(n_bs);
  c.tilts_deg.resize(n_bs);
  for (int b = 0; b < n_bs; ++b) {
    c.powers_dbm(b) = kPowerLoDbm + (kPowerHiDbm - kPowerLoDbm) * x(2 * b);
    c.tilts_deg(b) = kTiltLoDeg + (kTiltHiDeg - kTiltLoDeg) * x(2 * b + 1);
  }
  c.lambda_gu = lambda_gu;
  c.noise_watts = noise_watts;
  return c;
}

Eigen::VectorXd unit_from_config(const RadioConfig& config) {
  const Eigen::Index n_bs = config.powers_dbm.size();
  Eigen::VectorXd x(2 * n_bs);
  for (Eigen::Index b = 0; b < n_bs; ++b) {
    x(2 * b) = (config.powers_dbm(b) - kPowerLoDbm) / (kPowerHiDbm - kPowerLoDbm);
    x(2 * b + 1) = (config.tilts_deg(b) - kTiltLoDeg) / (kTiltHiDeg - kTiltLoDeg);
  }
  return x;
}

problems::Problem make_rrm_problem(const RrmOptions& opts) {
  auto layout = std::make_shared<NetworkLayout>(make_layout(opts.layout_seed));
  const double noise_watts = dbm_to_watts(opts.noise_dbm);
  const double lambda_gu = opts.lambda_gu;

  problems::Problem p;
  p.name = "rrm-uav";
  p.box = problems::Box::cube(2 * static_cast<int>(layout->bs.size()), 0.0, 1.0);
  p.objective = [layout, opts, lambda_gu, noise_watts](const Eigen::VectorXd& x) {
    return capacity_objective(*layout, config_from_unit(*layout, x, lambda_gu, noise_watts),
                              opts.eval_channels, opts.eval_seed);
  };
  p.observe_override = [layout, opts, lambda_gu, noise_watts](const Eigen::VectorXd& x,
                                                              math::Rng& rng) {
    return noisy_observe(*layout, config_from_unit(*layout, x, lambda_gu, noise_watts),
                         opts.n_ch, rng);
  };
  p.noise = problems::NoiseModel::none();  // noise arises from the empirical average
  problems::BlockCoordinate blocks;
  for (int b = 0; b < static_cast<int>(layout->bs.size()); ++b)
    blocks.blocks.push_back({2 * b, 2 * b + 1});
  p.blocks = blocks;
  return p;
}

}  // namespace locbo::rrm
