#pragma once

#include <cstdint>

#include "locbo/gp/model.hpp"

namespace locbo::gp {

/// Box constraints for (length_scale, noise_variance, output_scale).
struct FitBounds {
  double length_lo = 1e-3, length_hi = 1e3;
  double noise_lo = 1e-6, noise_hi = 1e2;
  double scale_lo = 1e-3, scale_hi = 1e3;

  void validate() const;
};

struct FitOptions {
  std::uint64_t seed = 0;
  int n_starts = 4;
  int max_iters = 120;
  double mean_offset = 0.0;
};

struct FitResult {
  KernelParams params;
  double log_likelihood = 0.0;
  bool improved = false;  // strictly better than init
  bool degraded = false;  // every candidate failed to factorize; init returned
};

/// Maximum-likelihood refit by multi-start Nelder-Mead on log-parameters.
/// Guarantees log_likelihood(result) >= log_likelihood(init) whenever init
/// itself factorizes; deterministic for a fixed seed.
FitResult fit_hyperparameters(const Dataset& data, const KernelParams& init,
                              const FitBounds& bounds, const FitOptions& opts = {});

}  // namespace locbo::gp
