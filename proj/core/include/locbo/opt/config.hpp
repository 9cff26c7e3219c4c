#pragma once

#include <cstdint>
#include <string>

#include "locbo/gp/fit.hpp"
#include "locbo/problems/problem.hpp"

namespace locbo::opt {

enum class Method { bo, ocbo, ocbo_l, locbo, rs };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct BoConfig {
  Method method = Method::locbo;
  double alpha = 0.2;        // target miscoverage
  double eta1 = 5e-3;        // initial learning rate
  double decay_w = 5e-2;     // learning-rate decay exponent
  double loc_length = 5.0;   // localization kernel length scale (inf = none)
  double loc_kappa = 4.0;    // localization kernel scale
  double reg_lambda = 4e-3;  // RKHS regularization
  int horizon = 50;          // optimization rounds after the random phase
  int n_init = 5;            // initial uniform random queries
  int n_candidates = 512;    // acquisition search budget per round
  int n_mc = 256;            // Monte-Carlo draws per acquisition evaluation
  int ocbo_grid_size = 10;   // recalibrator levels in [0.05, 0.95]
  std::uint64_t seed = 0;
  gp::FitBounds fit_bounds;  // resolved against the problem box by default

  void validate() const;
};

/// Defaults per problem family (block-coordinate problems get the network
/// settings, everything else the synthetic ones), specialized per method.
BoConfig default_config(const problems::Problem& problem, Method method);

}  // namespace locbo::opt
