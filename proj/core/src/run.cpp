#include "locbo/opt/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>

#include "locbo/cal/posterior.hpp"
#include "locbo/conformal/audit.hpp"
#include "locbo/conformal/recalibrator.hpp"
#include "locbo/conformal/threshold.hpp"
#include "locbo/math/normal.hpp"

namespace locbo::opt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

gp::KernelParams initial_params(const problems::Problem& problem, const gp::Dataset& data,
                                const gp::FitBounds& bounds) {
  double var_y = 1.0;
  if (data.size() > 1) {
    const double mean = data.observations.mean();
    var_y = (data.observations.array() - mean).square().sum() / (data.size() - 1);
    if (!(var_y > 0.0)) var_y = 1.0;
  }
  gp::KernelParams p;
  p.length_scale = std::clamp(0.25 * problem.box.diagonal(), bounds.length_lo, bounds.length_hi);
  p.noise_variance = std::clamp(0.05 * var_y + 1e-4, bounds.noise_lo, bounds.noise_hi);
  p.output_scale = std::clamp(var_y, bounds.scale_lo, bounds.scale_hi);
  return p;
}

// Sub-box and embedding for the active coordinate block; identity when the
// problem has no block structure.
struct RoundSpace {
  problems::Box box;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> embed;
};

RoundSpace round_space(const problems::Problem& problem, const Eigen::VectorXd& current,
                       int round) {
  if (!problem.blocks) {
    return {problem.box, [](const Eigen::VectorXd& z) { return z; }};
  }
  const std::vector<int>& dims = problem.blocks->block_dims(round);
  problems::Box sub;
  sub.lo.resize(static_cast<Eigen::Index>(dims.size()));
  sub.hi.resize(static_cast<Eigen::Index>(dims.size()));
  for (std::size_t i = 0; i < dims.size(); ++i) {
    sub.lo(static_cast<Eigen::Index>(i)) = problem.box.lo(dims[i]);
    sub.hi(static_cast<Eigen::Index>(i)) = problem.box.hi(dims[i]);
  }
  auto embed = [current, dims](const Eigen::VectorXd& z) {
    Eigen::VectorXd x = current;
    for (std::size_t i = 0; i < dims.size(); ++i)
      x(dims[i]) = z(static_cast<Eigen::Index>(i));
    return x;
  };
  return {sub, embed};
}

}  // namespace

CandidateChoice select_candidate(const Acquisition& acq, const problems::Box& box,
                                 int n_candidates, math::Rng& rng) {
  if (n_candidates < 1) throw std::invalid_argument("select_candidate: n_candidates >= 1");
  CandidateChoice best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_candidates; ++i) {
    Eigen::VectorXd x = box.sample(rng);
    const double v = acq(x, i);
    if (v > best.value) {
      best.x = std::move(x);
      best.value = v;
      best.index = i;
    }
  }
  return best;
}

Trace run(const problems::Problem& problem, const BoConfig& cfg) {
  cfg.validate();

  math::Rng init_rng = math::Rng::substream(cfg.seed, {1});
  math::Rng obs_rng = math::Rng::substream(cfg.seed, {2});

  Trace trace;
  trace.problem = problem.name;
  trace.config = cfg;
  trace.n_init = cfg.n_init;

  gp::Dataset data;
  double incumbent = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd x_incumbent;

  auto push_row = [&](TraceRow row, const Eigen::VectorXd& x, double y) {
    if (y > incumbent) {
      incumbent = y;
      x_incumbent = x;
    }
    row.t = static_cast<int>(trace.rows.size()) + 1;
    row.x = x;
    row.y = y;
    row.incumbent = incumbent;
    row.regret = problem.known_max
                     ? problem.known_max->value - problem.objective(x_incumbent)
                     : kNaN;
    trace.rows.push_back(std::move(row));
  };

  for (int i = 0; i < cfg.n_init; ++i) {
    const Eigen::VectorXd x = problem.box.sample(init_rng);
    const double y = problem.observe(x, obs_rng);
    push_row(TraceRow{}, x, y);
    data.add(x, y);
  }

  if (cfg.method == Method::rs) {
    for (int r = 1; r <= cfg.horizon; ++r) {
      math::Rng cand_rng = math::Rng::substream(cfg.seed, {4, static_cast<std::uint64_t>(r)});
      const Eigen::VectorXd x = problem.box.sample(cand_rng);
      const double y = problem.observe(x, obs_rng);
      push_row(TraceRow{}, x, y);
      data.add(x, y);
    }
    trace.x_hat = x_incumbent;
    trace.y_best = incumbent;
    return trace;
  }

  const conformal::LocKernelParams loc_kernel{cfg.loc_kappa, cfg.loc_length};
  const conformal::StepSchedule schedule{cfg.eta1, cfg.decay_w};
  std::optional<conformal::ThresholdFunction> threshold;
  std::optional<conformal::Recalibrator> recal;
  std::optional<conformal::LocalizedRecalibrator> loc_recal;
  switch (cfg.method) {
    case Method::locbo:
      threshold.emplace(cfg.alpha, loc_kernel, cfg.reg_lambda, schedule);
      break;
    case Method::ocbo:
      recal = conformal::Recalibrator::uniform_grid(cfg.ocbo_grid_size, 0.05, 0.95, schedule);
      break;
    case Method::ocbo_l:
      loc_recal = conformal::LocalizedRecalibrator::uniform_grid(
          cfg.ocbo_grid_size, 0.05, 0.95, loc_kernel, cfg.reg_lambda, schedule);
      break;
    default:
      break;
  }

  gp::KernelParams params = initial_params(problem, data, cfg.fit_bounds);
  Eigen::VectorXd current = x_incumbent;  // block-coordinate base configuration

  // Quantile of the recalibrated observation distribution (OCBO paths).
  auto recal_quantile = [&](double level, const Eigen::VectorXd& x,
                            const gp::PredictiveNormal& pred) {
    const double raw = recal ? recal->value_at(level) : loc_recal->value_at(level, x);
    const double r = std::clamp(raw, 1e-9, 1.0 - 1e-9);
    return pred.mean + std::sqrt(pred.variance) * math::norm_quantile(r);
  };

  for (int r = 1; r <= cfg.horizon; ++r) {
    gp::FitOptions fit_opts;
    fit_opts.seed = math::Rng::substream(cfg.seed, {3, static_cast<std::uint64_t>(r)}).next_u64();
    fit_opts.mean_offset = data.mean_observation();
    params = gp::fit_hyperparameters(data, params, cfg.fit_bounds, fit_opts).params;
    const gp::GpModel model(params, data, fit_opts.mean_offset);

    const double y_best = incumbent;
    const RoundSpace space = round_space(problem, current, r);

    Acquisition acq;
    switch (cfg.method) {
      case Method::bo:
        acq = [&](const Eigen::VectorXd& z, int) {
          const gp::PredictiveNormal p = model.posterior(space.embed(z));
          return cal::gaussian_ei(p.mean, std::sqrt(p.variance), y_best);
        };
        break;
      case Method::locbo:
        acq = [&](const Eigen::VectorXd& z, int idx) {
          const Eigen::VectorXd x = space.embed(z);
          const gp::PredictiveNormal pf = model.posterior(x);
          const gp::PredictiveNormal pred{pf.mean, pf.variance + params.noise_variance};
          const auto cl = cal::CalibratedLikelihood::from_threshold(
              pred, threshold->eval(x), cfg.alpha);
          const cal::CalibratedPosterior posterior(
              gp::GpModel::condition_from(pf, params.noise_variance), cl, false);
          math::Rng mc = math::Rng::substream(
              cfg.seed, {5, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(idx)});
          return cal::acquisition_ei(posterior, y_best, cfg.n_mc, mc);
        };
        break;
      case Method::ocbo:
      case Method::ocbo_l:
        acq = [&](const Eigen::VectorXd& z, int) {
          const Eigen::VectorXd x = space.embed(z);
          const gp::PredictiveNormal pred = model.predictive_observation(x);
          const double med = recal_quantile(0.5, x, pred);
          const double q_lo = recal_quantile(0.5 * cfg.alpha, x, pred);
          const double q_hi = recal_quantile(1.0 - 0.5 * cfg.alpha, x, pred);
          const double z_half = math::norm_quantile(1.0 - 0.5 * cfg.alpha);
          const double sd = std::max(std::max(q_hi - q_lo, 0.0) / (2.0 * z_half),
                                     1e-9 * std::sqrt(pred.variance));
          return cal::gaussian_ei(med, sd, y_best);
        };
        break;
      default:
        throw std::logic_error("run: unreachable method");
    }

    math::Rng cand_rng = math::Rng::substream(cfg.seed, {4, static_cast<std::uint64_t>(r)});
    const CandidateChoice choice = select_candidate(acq, space.box, cfg.n_candidates, cand_rng);
    const Eigen::VectorXd x_t = space.embed(choice.x);
    const double y_t = problem.observe(x_t, obs_rng);

    TraceRow row;
    row.acq = choice.value;
    if (cfg.method == Method::locbo) {
      const gp::PredictiveNormal pred = model.predictive_observation(x_t);
      const double lam = threshold->eval(x_t);
      const conformal::PredictionInterval iv = conformal::interval(pred, lam);
      row.lower = iv.lower;
      row.upper = iv.upper;
      row.lambda = lam;
      row.covered = iv.contains(y_t) ? 1 : 0;
      threshold = threshold->updated(x_t, row.covered == 1, r, cfg.alpha);
    } else if (cfg.method == Method::ocbo || cfg.method == Method::ocbo_l) {
      const gp::PredictiveNormal pred = model.predictive_observation(x_t);
      const double q_lo = recal_quantile(0.5 * cfg.alpha, x_t, pred);
      const double q_hi = recal_quantile(1.0 - 0.5 * cfg.alpha, x_t, pred);
      row.lower = std::min(q_lo, q_hi);
      row.upper = std::max(q_lo, q_hi);
      row.covered = (row.lower <= y_t && y_t <= row.upper) ? 1 : 0;
      const auto& levels = recal ? recal->levels() : loc_recal->levels();
      std::vector<bool> covered_per_level(levels.size());
      for (std::size_t i = 0; i < levels.size(); ++i)
        covered_per_level[i] = y_t <= recal_quantile(levels[i], x_t, pred);
      if (recal)
        recal = recal->updated(covered_per_level, r);
      else
        loc_recal = loc_recal->updated(x_t, covered_per_level, r);
    }

    push_row(std::move(row), x_t, y_t);
    data.add(x_t, y_t);
    current = x_t;
  }

  trace.x_hat = x_incumbent;
  trace.y_best = incumbent;
  if (threshold) {
    trace.conformal_state = threshold->to_json().dump();
  } else if (recal) {
    trace.conformal_state = recal->to_json().dump();
  } else if (loc_recal) {
    trace.conformal_state = loc_recal->to_json().dump();
  }
  return trace;
}

std::vector<double> simple_regret_series(const problems::Problem& problem,
                                         const Trace& trace) {
  if (!problem.known_max)
    throw std::invalid_argument(
        "simple_regret: this problem has no known optimum; report the capacity "
        "metric instead");
  std::vector<double> out;
  out.reserve(trace.rows.size());
  double best_y = -std::numeric_limits<double>::infinity();
  double f_at_best = 0.0;
  for (const auto& row : trace.rows) {
    if (row.y > best_y) {
      best_y = row.y;
      f_at_best = problem.objective(row.x);
    }
    out.push_back(problem.known_max->value - f_at_best);
  }
  return out;
}

UtilityGuaranteeReport utility_guarantee_diagnostic(const problems::Problem& problem,
                                                    const Trace& trace, double epsilon,
                                                    double b_xi) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("utility_guarantee_diagnostic: epsilon in (0, 1]");
  if (!(b_xi > 0.0 && b_xi <= 0.5))
    throw std::invalid_argument("utility_guarantee_diagnostic: b_xi in (0, 0.5]");
  if (trace.config.method != Method::locbo)
    throw std::invalid_argument("utility_guarantee_diagnostic: needs a LOCBO trace");

  const auto& cfg = trace.config;
  conformal::AuditParams ap;
  ap.alpha = cfg.alpha;
  ap.eta1 = cfg.eta1;
  ap.reg_lambda = cfg.reg_lambda;
  ap.kernel = {cfg.loc_kappa, cfg.loc_length};
  ap.input_norm_bound = problem.box.diagonal();

  UtilityGuaranteeReport report;
  double incumbent = -std::numeric_limits<double>::infinity();
  int hits = 0;
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    if (static_cast<int>(i) >= trace.n_init) {
      const double utility = std::max(problem.objective(row.x) - incumbent, 0.0);
      if (utility >= 2.0 * row.acq / (cfg.alpha * epsilon)) ++hits;
      ++report.rounds;
    }
    incumbent = std::max(incumbent, row.y);
  }
  if (report.rounds == 0)
    throw std::invalid_argument("utility_guarantee_diagnostic: no optimization rounds");
  report.fraction = static_cast<double>(hits) / report.rounds;
  const double beta = conformal::audit_beta(ap);
  report.floor =
      1.0 - (cfg.alpha + beta / std::sqrt(static_cast<double>(report.rounds)) +
             cfg.loc_kappa) /
                b_xi;
  return report;
}

}  // namespace locbo::opt
