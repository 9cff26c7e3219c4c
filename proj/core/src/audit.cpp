#include "locbo/conformal/audit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace locbo::conformal {

double rbf_profile_lipschitz(const LocKernelParams& kernel) {
  if (kernel.kappa == 0.0 || std::isinf(kernel.length)) return 0.0;
  // max_z |d/dz kappa*exp(-z^2/l^2)| attained at z = l/sqrt(2).
  return kernel.kappa * std::sqrt(2.0) * std::exp(-0.5) / kernel.length;
}

double audit_beta(const AuditParams& p) {
  const double kappa = p.kernel.kappa;
  double mid = 0.0;
  if (kappa > 0.0) {
    if (!(p.reg_lambda > 0.0)) return std::numeric_limits<double>::infinity();
    const double rho = rbf_profile_lipschitz(p.kernel);
    mid = 4.0 * std::sqrt(rho * kappa * p.input_norm_bound) / (p.eta1 * p.reg_lambda);
  }
  return 2.0 / p.eta1 + mid + 2.0 * (2.0 * kappa + 1.0);
}

CoverageAudit coverage_audit(const std::vector<bool>& covered, const AuditParams& p) {
  if (covered.empty()) throw std::invalid_argument("coverage_audit: empty trace");
  CoverageAudit out;
  out.rounds = static_cast<int>(covered.size());
  int misses = 0;
  for (bool c : covered)
    if (!c) ++misses;
  out.miscoverage_rate = static_cast<double>(misses) / out.rounds;
  out.beta = audit_beta(p);
  out.bound = p.alpha + out.beta / std::sqrt(static_cast<double>(out.rounds)) + p.kernel.kappa;
  return out;
}

CoverageAudit coverage_audit(const std::vector<std::pair<double, PredictionInterval>>& trace,
                             const AuditParams& p) {
  std::vector<bool> covered;
  covered.reserve(trace.size());
  for (const auto& [y, iv] : trace) covered.push_back(iv.contains(y));
  return coverage_audit(covered, p);
}

}  // namespace locbo::conformal
