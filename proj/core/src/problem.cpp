#include "locbo/problems/problem.hpp"

#include <cmath>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "locbo/problems/synthetic.hpp"
#include "locbo/rrm/sim.hpp"

namespace locbo::problems {

namespace {

// Each declared optimum is probed once per process.
void validate_once(const Problem& problem) {
  static std::mutex mu;
  static std::set<std::string> validated;
  std::lock_guard<std::mutex> lock(mu);
  if (validated.count(problem.name)) return;
  validate_known_max(problem);
  validated.insert(problem.name);
}

}  // namespace

Box Box::cube(int dim, double lo, double hi) {
  Box b;
  b.lo = Eigen::VectorXd::Constant(dim, lo);
  b.hi = Eigen::VectorXd::Constant(dim, hi);
  return b;
}

bool Box::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lo.size()) return false;
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

Eigen::VectorXd Box::sample(math::Rng& rng) const {
  Eigen::VectorXd x(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) x(i) = rng.uniform(lo(i), hi(i));
  return x;
}

NoiseModel NoiseModel::none() {
  return {NoiseKind::none, [](const Eigen::VectorXd&) { return 0.0; }};
}

NoiseModel NoiseModel::homoscedastic(double var) {
  if (!(var >= 0.0)) throw std::invalid_argument("NoiseModel: variance must be >= 0");
  return {NoiseKind::homoscedastic_gaussian, [var](const Eigen::VectorXd&) { return var; }};
}

NoiseModel NoiseModel::heteroscedastic(std::function<double(const Eigen::VectorXd&)> var_fn) {
  return {NoiseKind::heteroscedastic_gaussian, std::move(var_fn)};
}

const std::vector<int>& BlockCoordinate::block_dims(int round) const {
  if (round < 1) throw std::invalid_argument("BlockCoordinate: round must be >= 1");
  return blocks[static_cast<std::size_t>((round - 1) % n_blocks())];
}

double Problem::observe(const Eigen::VectorXd& x, math::Rng& rng) const {
  if (!box.contains(x)) throw std::invalid_argument("observe: query outside the search box");
  if (observe_override) return observe_override(x, rng);
  const double f = objective(x);
  if (noise.kind == NoiseKind::none) return f;
  const double var = noise.variance(x);
  return f + std::sqrt(var) * rng.normal();
}

void validate_known_max(const Problem& problem, int n_probe, std::uint64_t seed, double tol) {
  if (!problem.known_max)
    throw std::invalid_argument("validate_known_max: problem has no known maximum");
  const double f_star = problem.known_max->value;
  math::Rng rng(seed);
  for (int i = 0; i < n_probe; ++i) {
    const Eigen::VectorXd x = problem.box.sample(rng);
    if (problem.objective(x) > f_star + tol) {
      std::ostringstream msg;
      msg << "validate_known_max: probe beat the declared optimum of " << problem.name;
      throw std::runtime_error(msg.str());
    }
  }
}

Problem make_problem(const std::string& name) {
  if (name == "ackley2d" || name == "ackley2d-hetero") {
    Problem p;
    p.name = name;
    p.box = Box::cube(2, -10.0, 10.0);
    p.objective = [](const Eigen::VectorXd& x) { return ackley2d(x); };
    p.known_max = KnownMax{Eigen::VectorXd::Zero(2), 0.0};
    p.noise = name == "ackley2d" ? NoiseModel::none()
                                 : NoiseModel::heteroscedastic(hetero_noise_ackley);
    validate_once(p);
    return p;
  }
  if (name == "synthetic1d" || name == "synthetic1d-hetero") {
    Problem p;
    p.name = name;
    p.box = Box::cube(1, -5.0, 5.0);
    p.objective = [](const Eigen::VectorXd& x) { return synthetic1d(x(0)); };
    Eigen::VectorXd xs(1);
    xs << kSynthetic1dArgmax;
    p.known_max = KnownMax{xs, kSynthetic1dMax};
    p.noise = name == "synthetic1d"
                  ? NoiseModel::none()
                  : NoiseModel::heteroscedastic(
                        [](const Eigen::VectorXd& x) { return hetero_noise_1d(x(0)); });
    validate_once(p);
    return p;
  }
  if (name == "rrm-uav") return rrm::make_rrm_problem();

  std::ostringstream msg;
  msg << "unknown problem '" << name << "'; available:";
  for (const auto& n : problem_names()) msg << " " << n;
  throw std::invalid_argument(msg.str());
}

std::vector<std::string> problem_names() {
  return {"ackley2d", "ackley2d-hetero", "synthetic1d", "synthetic1d-hetero", "rrm-uav"};
}

}  // namespace locbo::problems
