#include "locbo/experiment/spec.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace locbo::experiment {

namespace {

double length_from_json(const nlohmann::json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("override 'l': expected a number or \"inf\"");
  }
  return v.get<double>();
}

MethodSpec method_spec_from_json(const nlohmann::json& j) {
  MethodSpec m;
  if (j.is_string()) {
    m.method = opt::method_from_name(j.get<std::string>());
    m.label = j.get<std::string>();
    return m;
  }
  m.method = opt::method_from_name(j.at("name").get<std::string>());
  m.label = j.value("label", j.at("name").get<std::string>());
  m.overrides = j.value("overrides", nlohmann::json::object());
  return m;
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& root) {
  // A manifest embeds the original spec under "spec".
  const nlohmann::json& j = root.contains("spec") ? root.at("spec") : root;

  ExperimentSpec spec;
  spec.problem = j.at("problem").get<std::string>();
  for (const auto& m : j.at("methods")) spec.methods.push_back(method_spec_from_json(m));
  spec.overrides = j.value("overrides", nlohmann::json::object());
  spec.n_trials = j.value("n_trials", 7);
  spec.base_seed = j.value("base_seed", static_cast<std::uint64_t>(1));
  spec.out_dir = j.value("out_dir", std::string("results"));
  spec.validate();
  return spec;
}

nlohmann::json ExperimentSpec::to_json() const {
  nlohmann::json methods_json = nlohmann::json::array();
  for (const auto& m : methods) {
    methods_json.push_back({{"name", opt::method_name(m.method)},
                            {"label", m.label},
                            {"overrides", m.overrides}});
  }
  return {{"problem", problem},   {"methods", methods_json}, {"overrides", overrides},
          {"n_trials", n_trials}, {"base_seed", base_seed},  {"out_dir", out_dir}};
}

void ExperimentSpec::validate() const {
  if (methods.empty()) throw std::invalid_argument("ExperimentSpec: methods must be non-empty");
  if (n_trials < 1) throw std::invalid_argument("ExperimentSpec: n_trials must be >= 1");
  for (const auto& m : methods)
    if (m.label.empty()) throw std::invalid_argument("ExperimentSpec: empty method label");
}

opt::BoConfig apply_overrides(opt::BoConfig config, const nlohmann::json& overrides) {
  for (const auto& [key, value] : overrides.items()) {
    if (key == "alpha")
      config.alpha = value.get<double>();
    else if (key == "eta1")
      config.eta1 = value.get<double>();
    else if (key == "w")
      config.decay_w = value.get<double>();
    else if (key == "l")
      config.loc_length = length_from_json(value);
    else if (key == "kappa")
      config.loc_kappa = value.get<double>();
    else if (key == "lambda")
      config.reg_lambda = value.get<double>();
    else if (key == "T")
      config.horizon = value.get<int>();
    else if (key == "n_init")
      config.n_init = value.get<int>();
    else if (key == "n_candidates")
      config.n_candidates = value.get<int>();
    else if (key == "n_mc")
      config.n_mc = value.get<int>();
    else if (key == "ocbo_grid_size")
      config.ocbo_grid_size = value.get<int>();
    else
      throw std::invalid_argument("unknown config override '" + key + "'");
  }
  return config;
}

nlohmann::json config_to_json(const opt::BoConfig& config) {
  return {{"method", opt::method_name(config.method)},
          {"alpha", config.alpha},
          {"eta1", config.eta1},
          {"w", config.decay_w},
          {"l", std::isinf(config.loc_length) ? nlohmann::json("inf")
                                              : nlohmann::json(config.loc_length)},
          {"kappa", config.loc_kappa},
          {"lambda", config.reg_lambda},
          {"T", config.horizon},
          {"n_init", config.n_init},
          {"n_candidates", config.n_candidates},
          {"n_mc", config.n_mc},
          {"ocbo_grid_size", config.ocbo_grid_size},
          {"seed", config.seed}};
}

}  // namespace locbo::experiment
