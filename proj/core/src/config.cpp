#include "locbo/opt/config.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace locbo::opt {

std::string method_name(Method m) {
  switch (m) {
    case Method::bo: return "BO";
    case Method::ocbo: return "OCBO";
    case Method::ocbo_l: return "OCBO-L";
    case Method::locbo: return "LOCBO";
    case Method::rs: return "RS";
  }
  throw std::logic_error("method_name: unreachable");
}

Method method_from_name(const std::string& name) {
  if (name == "BO") return Method::bo;
  if (name == "OCBO") return Method::ocbo;
  if (name == "OCBO-L") return Method::ocbo_l;
  if (name == "LOCBO") return Method::locbo;
  if (name == "RS") return Method::rs;
  throw std::invalid_argument("unknown method '" + name +
                              "'; available: BO OCBO OCBO-L LOCBO RS");
}

void BoConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("BoConfig: horizon must be >= 1");
  if (n_init < 1) throw std::invalid_argument("BoConfig: n_init must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("BoConfig: alpha must lie in (0, 1)");
  if (!(eta1 > 0.0)) throw std::invalid_argument("BoConfig: eta1 must be > 0");
  if (!(decay_w >= 0.0 && decay_w <= 1.0))
    throw std::invalid_argument("BoConfig: decay exponent must lie in [0, 1]");
  if (!(loc_kappa >= 0.0)) throw std::invalid_argument("BoConfig: kappa must be >= 0");
  if (!(loc_length > 0.0)) throw std::invalid_argument("BoConfig: length scale must be > 0");
  if (!(reg_lambda >= 0.0)) throw std::invalid_argument("BoConfig: reg_lambda must be >= 0");
  if (reg_lambda > 0.0 && eta1 >= 1.0 / reg_lambda)
    throw std::invalid_argument("BoConfig: eta1 must satisfy eta1 < 1/reg_lambda");
  if (n_candidates < 1) throw std::invalid_argument("BoConfig: n_candidates must be >= 1");
  if (n_mc < 1) throw std::invalid_argument("BoConfig: n_mc must be >= 1");
  if (ocbo_grid_size < 2) throw std::invalid_argument("BoConfig: grid needs >= 2 levels");
  fit_bounds.validate();
}

BoConfig default_config(const problems::Problem& problem, Method method) {
  const bool network = problem.blocks.has_value();
  BoConfig c;
  c.method = method;
  if (network) {
    c.alpha = 0.25;
    c.decay_w = 5e-3;
    c.loc_length = 1.0 / 3.0;
    c.loc_kappa = 2.0;
    c.reg_lambda = 1e-4;
    c.n_init = 50;
    c.n_candidates = 100;
    c.horizon = 90;
  } else {
    c.alpha = 0.2;
    c.decay_w = 5e-2;
    c.loc_length = 5.0;
    c.loc_kappa = method == Method::ocbo_l ? 5.0 : 4.0;
    c.reg_lambda = 4e-3;
    c.n_init = 5;
    c.n_candidates = 512;
    c.horizon = 50;
  }
  const double diag = problem.box.diagonal();
  c.fit_bounds.length_lo = 0.01 * diag;
  c.fit_bounds.length_hi = 2.0 * diag;
  c.fit_bounds.noise_lo = 1e-6;
  c.fit_bounds.noise_hi = 100.0;
  c.fit_bounds.scale_lo = 1e-2;
  c.fit_bounds.scale_hi = 1e3;
  if (network) {
    // With ~50 points in 18 dimensions the likelihood degenerates toward
    // zero-noise interpolation of lucky draws; keep the noise floor at the
    // scale of the single-draw capacity variance.
    c.fit_bounds.noise_lo = 1e-2;
  }
  return c;
}

}  // namespace locbo::opt
