#include "locbo/rrm/layout.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "locbo/math/rng.hpp"
#include "locbo/rrm/sim.hpp"

namespace locbo::rrm {

namespace {

std::vector<Eigen::Vector2d> site_positions(const RrmConstants& c) {
  // Equilateral triangle around the origin with side inter_site_distance.
  const double r = c.inter_site_distance / std::sqrt(3.0);
  std::vector<Eigen::Vector2d> sites;
  for (double deg : {90.0, 210.0, 330.0}) {
    const double rad = deg * M_PI / 180.0;
    sites.emplace_back(r * std::cos(rad), r * std::sin(rad));
  }
  return sites;
}

void add_base_stations(NetworkLayout& layout) {
  const auto sites = site_positions(layout.constants);
  int cell_id = 0;
  for (int s = 0; s < 3; ++s) {
    for (double az : {0.0, 120.0, 240.0}) {
      BaseStation bs;
      bs.position = sites[static_cast<std::size_t>(s)];
      bs.height = layout.constants.bs_height;
      bs.azimuth_deg = az;
      bs.site = s;
      bs.cell_id = cell_id++;
      layout.bs.push_back(bs);
    }
  }
}

void finalize(NetworkLayout& layout, math::Rng* shadow_rng) {
  const auto& c = layout.constants;
  layout.shadow_db = Eigen::MatrixXd::Zero(layout.n_users(), static_cast<int>(layout.bs.size()));
  if (shadow_rng != nullptr) {
    for (int k = 0; k < layout.n_users(); ++k) {
      const double std_db = layout.users[static_cast<std::size_t>(k)].is_uav
                                ? c.shadow_std_uav_db
                                : c.shadow_std_gu_db;
      for (int b = 0; b < static_cast<int>(layout.bs.size()); ++b)
        layout.shadow_db(k, b) = std_db * shadow_rng->normal();
    }
  }

  // Associate to the strongest large-scale gain at zero tilt.
  layout.association.resize(static_cast<std::size_t>(layout.n_users()));
  for (int k = 0; k < layout.n_users(); ++k) {
    double best = -1.0;
    int best_b = 0;
    for (int b = 0; b < static_cast<int>(layout.bs.size()); ++b) {
      const double g = large_scale_gain(layout, b, k, 0.0);
      if (g > best) {
        best = g;
        best_b = b;
      }
    }
    layout.association[static_cast<std::size_t>(k)] = best_b;
  }
}

}  // namespace

NetworkLayout make_layout(std::uint64_t seed, const RrmConstants& constants) {
  NetworkLayout layout;
  layout.constants = constants;
  layout.seed = seed;
  add_base_stations(layout);

  math::Rng rng = math::Rng::substream(seed, {0x1a});
  const auto sites = site_positions(constants);

  // 12 ground users per site, uniform in a disc around the site center.
  for (int s = 0; s < 3; ++s) {
    for (int i = 0; i < layout.n_gu / 3; ++i) {
      const double rad = constants.gu_drop_radius * std::sqrt(rng.uniform());
      const double ang = rng.uniform(0.0, 2.0 * M_PI);
      User u;
      u.position = sites[static_cast<std::size_t>(s)] +
                   Eigen::Vector2d(rad * std::cos(ang), rad * std::sin(ang));
      u.height = constants.gu_height;
      u.is_uav = false;
      layout.users.push_back(u);
    }
  }

  // 7 UAVs per rectangle on an even 7x1 grid; rectangles at the triangle
  // edge midpoints and the centroid.
  std::vector<Eigen::Vector2d> rect_centers = {
      0.5 * (sites[0] + sites[1]), 0.5 * (sites[1] + sites[2]),
      0.5 * (sites[0] + sites[2]), Eigen::Vector2d::Zero()};
  for (const auto& center : rect_centers) {
    for (int i = 0; i < 7; ++i) {
      User u;
      u.position = center + Eigen::Vector2d(-0.5 * constants.uav_rect_width +
                                                constants.uav_rect_width * i / 6.0,
                                            0.0);
      u.height = constants.uav_altitude;
      u.is_uav = true;
      layout.users.push_back(u);
    }
  }

  math::Rng shadow_rng = math::Rng::substream(seed, {0x5d});
  finalize(layout, &shadow_rng);
  return layout;
}

NetworkLayout make_symmetric_test_layout(const RrmConstants& constants) {
  NetworkLayout layout;
  layout.constants = constants;
  layout.seed = 0;
  layout.n_gu = 9;
  layout.n_uav = 3;
  add_base_stations(layout);

  const auto sites = site_positions(constants);
  for (int s = 0; s < 3; ++s) {
    // Three GUs per site at fixed offsets from the site center.
    for (double deg : {0.0, 120.0, 240.0}) {
      const double rad = deg * M_PI / 180.0;
      User u;
      u.position = sites[static_cast<std::size_t>(s)] +
                   60.0 * Eigen::Vector2d(std::cos(rad), std::sin(rad));
      u.height = constants.gu_height;
      u.is_uav = false;
      layout.users.push_back(u);
    }
  }
  for (int s = 0; s < 3; ++s) {
    User u;
    u.position = 0.5 * sites[static_cast<std::size_t>(s)];
    u.height = constants.uav_altitude;
    u.is_uav = true;
    layout.users.push_back(u);
  }
  finalize(layout, nullptr);  // no shadow fading
  return layout;
}

nlohmann::json NetworkLayout::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["n_gu"] = n_gu;
  j["n_uav"] = n_uav;
  nlohmann::json jbs = nlohmann::json::array();
  for (const auto& b : bs)
    jbs.push_back({{"x", b.position.x()},
                   {"y", b.position.y()},
                   {"height", b.height},
                   {"azimuth", b.azimuth_deg},
                   {"site", b.site},
                   {"cell_id", b.cell_id}});
  j["bs"] = jbs;
  nlohmann::json jusers = nlohmann::json::array();
  for (const auto& u : users)
    jusers.push_back({{"x", u.position.x()},
                      {"y", u.position.y()},
                      {"height", u.height},
                      {"is_uav", u.is_uav}});
  j["users"] = jusers;
  j["association"] = association;
  nlohmann::json jsh = nlohmann::json::array();
  for (Eigen::Index k = 0; k < shadow_db.rows(); ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index b = 0; b < shadow_db.cols(); ++b) row.push_back(shadow_db(k, b));
    jsh.push_back(row);
  }
  j["shadow_db"] = jsh;
  return j;
}

NetworkLayout NetworkLayout::from_json(const nlohmann::json& j) {
  NetworkLayout layout;
  layout.seed = j.at("seed").get<std::uint64_t>();
  layout.n_gu = j.at("n_gu").get<int>();
  layout.n_uav = j.at("n_uav").get<int>();
  for (const auto& b : j.at("bs")) {
    BaseStation s;
    s.position = {b.at("x").get<double>(), b.at("y").get<double>()};
    s.height = b.at("height").get<double>();
    s.azimuth_deg = b.at("azimuth").get<double>();
    s.site = b.at("site").get<int>();
    s.cell_id = b.at("cell_id").get<int>();
    layout.bs.push_back(s);
  }
  for (const auto& u : j.at("users")) {
    User s;
    s.position = {u.at("x").get<double>(), u.at("y").get<double>()};
    s.height = u.at("height").get<double>();
    s.is_uav = u.at("is_uav").get<bool>();
    layout.users.push_back(s);
  }
  layout.association = j.at("association").get<std::vector<int>>();
  const auto& jsh = j.at("shadow_db");
  layout.shadow_db.resize(static_cast<Eigen::Index>(jsh.size()),
                          static_cast<Eigen::Index>(layout.bs.size()));
  for (Eigen::Index k = 0; k < layout.shadow_db.rows(); ++k)
    for (Eigen::Index b = 0; b < layout.shadow_db.cols(); ++b)
      layout.shadow_db(k, b) = jsh[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)];
  if (static_cast<int>(layout.users.size()) != layout.n_users() ||
      static_cast<int>(layout.association.size()) != layout.n_users())
    throw std::invalid_argument("NetworkLayout: inconsistent serialized layout");
  return layout;
}

}  // namespace locbo::rrm
