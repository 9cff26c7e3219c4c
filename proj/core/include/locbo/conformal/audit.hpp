#pragma once

#include <utility>
#include <vector>

#include "locbo/conformal/score.hpp"
#include "locbo/conformal/threshold.hpp"

namespace locbo::conformal {

struct AuditParams {
  double alpha = 0.2;
  double eta1 = 5e-3;
  double reg_lambda = 0.0;
  LocKernelParams kernel;
  double input_norm_bound = 1.0;  // D: bound on ||x_t||, taken from the box diagonal
};

struct CoverageAudit {
  double miscoverage_rate = 0.0;
  double bound = 0.0;   // alpha + beta / sqrt(T) + kappa
  double beta = 0.0;
  double score_bound = 2.0;  // B for the NC score in use
  int rounds = 0;
};

/// Lipschitz constant of the RBF localization profile kappa*exp(-z^2/l^2),
/// maximized over z. Zero for kappa = 0 or l = inf.
double rbf_profile_lipschitz(const LocKernelParams& kernel);

/// beta = 2/eta1 + 4*sqrt(rho*kappa*D)/(eta1*lambda) + 2*(2*kappa + 1).
/// The middle term is zero without localization and +inf when kappa > 0
/// with reg_lambda = 0 (the guarantee requires lambda > 0).
double audit_beta(const AuditParams& p);

CoverageAudit coverage_audit(const std::vector<bool>& covered, const AuditParams& p);

/// Overload taking raw (observation, interval) pairs.
CoverageAudit coverage_audit(const std::vector<std::pair<double, PredictionInterval>>& trace,
                             const AuditParams& p);

}  // namespace locbo::conformal
