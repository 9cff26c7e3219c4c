#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <vector>

namespace locbo::rrm {

/// Free constants of the simplified propagation and antenna stack. These
/// are stand-in values chosen for qualitative behavior (tilt-gain coupling,
/// interference geometry), not calibrated against any measured deployment.
struct RrmConstants {
  double inter_site_distance = 200.0;  // m
  double bs_height = 25.0;             // m
  double gu_height = 1.5;              // m
  double uav_altitude = 100.0;         // m
  double pathloss_ref_db = 38.0;       // PL at 1 m
  double pathloss_exp_gu = 3.7;
  double pathloss_exp_uav = 2.2;
  double shadow_std_gu_db = 8.0;
  double shadow_std_uav_db = 4.0;
  double antenna_gain_max_db = 8.0;
  double horiz_beamwidth_deg = 65.0;
  double vert_beamwidth_deg = 10.0;
  double front_to_back_db = 25.0;
  double gu_drop_radius = 100.0;       // m, per-site user disc
  double uav_rect_width = 60.0;        // m
  double uav_rect_height = 20.0;       // m
};

struct BaseStation {
  Eigen::Vector2d position;  // site coordinates, m
  double height = 25.0;
  double azimuth_deg = 0.0;  // sector boresight
  int site = 0;
  int cell_id = 0;
};

struct User {
  Eigen::Vector2d position;
  double height = 1.5;
  bool is_uav = false;
};

/// Immutable network snapshot: 3 hexagonally arranged sites with 3 sector
/// base stations each, ground users dropped per site, UAVs on even grids
/// inside four rectangles, strongest-gain association at zero tilt, and
/// per-link shadow fading frozen at construction.
struct NetworkLayout {
  RrmConstants constants;
  std::uint64_t seed = 0;
  std::vector<BaseStation> bs;          // 9
  std::vector<User> users;              // GUs first, then UAVs
  std::vector<int> association;         // user -> serving BS index
  Eigen::MatrixXd shadow_db;            // users x bs, frozen draws
  int n_gu = 36;
  int n_uav = 28;

  int n_users() const { return n_gu + n_uav; }

  nlohmann::json to_json() const;
  static NetworkLayout from_json(const nlohmann::json& j);
};

NetworkLayout make_layout(std::uint64_t seed, const RrmConstants& constants = {});

/// Test helper: regular layout with users on symmetric rings and shadow
/// fading disabled, so 120-degree rotations are exact symmetries.
NetworkLayout make_symmetric_test_layout(const RrmConstants& constants = {});

}  // namespace locbo::rrm
