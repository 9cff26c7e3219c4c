#pragma once

#include <functional>
#include <vector>

#include "locbo/opt/trace.hpp"
#include "locbo/problems/problem.hpp"

namespace locbo::opt {

/// Acquisition callable: value at a candidate point, with the candidate
/// index available for per-candidate random streams.
using Acquisition = std::function<double(const Eigen::VectorXd&, int)>;

struct CandidateChoice {
  Eigen::VectorXd x;
  double value = 0.0;
  int index = 0;
};

/// Draws n_candidates uniform points in the box and returns the acquisition
/// argmax; ties break toward the lowest index.
CandidateChoice select_candidate(const Acquisition& acq, const problems::Box& box,
                                 int n_candidates, math::Rng& rng);

/// Executes one optimization run: n_init uniform queries followed by
/// `horizon` rounds of the configured method. Deterministic per seed.
Trace run(const problems::Problem& problem, const BoConfig& config);

/// Simple regret per round: f(x*) - f(x_{t*}) with t* the argmax of the
/// observed y up to each round. Throws when the problem has no known
/// optimum (use the capacity metric instead).
std::vector<double> simple_regret_series(const problems::Problem& problem,
                                         const Trace& trace);

struct UtilityGuaranteeReport {
  double fraction = 0.0;  // rounds where utility >= 2*acq/(alpha*eps)
  double floor = 0.0;     // 1 - (alpha + beta/sqrt(T) + kappa) / b_xi
  int rounds = 0;
};

/// Empirical check of the iterate-utility guarantee on a completed run with
/// known objective; epsilon is the user-supplied posterior-conservativeness
/// constant, b_xi the noise-symmetry level.
UtilityGuaranteeReport utility_guarantee_diagnostic(const problems::Problem& problem,
                                                    const Trace& trace, double epsilon,
                                                    double b_xi);

}  // namespace locbo::opt
