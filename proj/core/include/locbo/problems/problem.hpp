#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "locbo/math/rng.hpp"

namespace locbo::problems {

struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  static Box cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Eigen::VectorXd& x) const;
  double diagonal() const { return (hi - lo).norm(); }
  Eigen::VectorXd sample(math::Rng& rng) const;
};

enum class NoiseKind { none, homoscedastic_gaussian, heteroscedastic_gaussian };

struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  std::function<double(const Eigen::VectorXd&)> variance;  // sigma_xi^2(x)

  static NoiseModel none();
  static NoiseModel homoscedastic(double var);
  static NoiseModel heteroscedastic(std::function<double(const Eigen::VectorXd&)> var_fn);
};

struct KnownMax {
  Eigen::VectorXd x;
  double value = 0.0;
};

/// Block-coordinate query structure: round t optimizes the coordinates of
/// block ((t-1) mod n_blocks) while the rest stay at the current config.
struct BlockCoordinate {
  std::vector<std::vector<int>> blocks;  // coordinate indices per block

  int n_blocks() const { return static_cast<int>(blocks.size()); }
  const std::vector<int>& block_dims(int round) const;
};

struct Problem {
  std::string name;
  Box box;
  std::function<double(const Eigen::VectorXd&)> objective;  // noiseless f
  NoiseModel noise;
  std::optional<KnownMax> known_max;
  std::optional<BlockCoordinate> blocks;
  // When set, replaces f + Gaussian noise as the observation oracle
  // (used by simulation-backed problems).
  std::function<double(const Eigen::VectorXd&, math::Rng&)> observe_override;

  double observe(const Eigen::VectorXd& x, math::Rng& rng) const;
};

/// Checks f(x*) >= f(x) - tol on a seeded random probe of the box.
void validate_known_max(const Problem& problem, int n_probe = 1'000'000,
                        std::uint64_t seed = 0x6b6d, double tol = 1e-9);

/// Registry addressable from the CLI.
Problem make_problem(const std::string& name);
std::vector<std::string> problem_names();

}  // namespace locbo::problems
