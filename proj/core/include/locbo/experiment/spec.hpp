#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "locbo/opt/config.hpp"

namespace locbo::experiment {

struct MethodSpec {
  opt::Method method = opt::Method::locbo;
  std::string label;             // output name; defaults to the method name
  nlohmann::json overrides;      // per-method config overrides
};

/// Declarative description of one experiment: a problem, a set of method
/// variants, and the trial/seed plan. Parsed from JSON; a persisted
/// manifest (which embeds the spec under "spec") is accepted as well.
struct ExperimentSpec {
  std::string problem;
  std::vector<MethodSpec> methods;
  nlohmann::json overrides;      // applied to every method
  int n_trials = 7;
  std::uint64_t base_seed = 1;
  std::string out_dir = "results";

  static ExperimentSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  void validate() const;
};

/// Recognized override keys: alpha, eta1, w, l (number or "inf"), kappa,
/// lambda, T, n_init, n_candidates, n_mc, ocbo_grid_size.
opt::BoConfig apply_overrides(opt::BoConfig config, const nlohmann::json& overrides);

nlohmann::json config_to_json(const opt::BoConfig& config);

}  // namespace locbo::experiment
