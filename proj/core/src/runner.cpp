#include "locbo/experiment/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "locbo/conformal/audit.hpp"

namespace locbo::experiment {

namespace fs = std::filesystem;

namespace {

std::string trace_csv_name(const std::string& label, int trial) {
  return "traces/" + label + "_trial" + std::to_string(trial) + ".csv";
}

std::string trace_json_name(const std::string& label, int trial) {
  return "traces/" + label + "_trial" + std::to_string(trial) + ".json";
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

struct CsvTrace {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw std::runtime_error("trace CSV: missing column '" + name + "'");
    return static_cast<int>(it - header.begin());
  }
};

CsvTrace parse_trace_csv(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  CsvTrace out;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty trace: " + path.string());
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) out.header.push_back(cell);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != out.header.size())
      throw std::runtime_error("ragged trace CSV: " + path.string());
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<double> metric_from_csv(const problems::Problem& problem, const CsvTrace& csv) {
  const int y_col = csv.column("y");
  const bool use_regret = problem.known_max.has_value();
  const int regret_col = use_regret ? csv.column("regret") : -1;
  const int dim = problem.box.dim();
  const int x0 = csv.column("x0");

  std::vector<double> metric;
  metric.reserve(csv.rows.size());
  double best_y = -std::numeric_limits<double>::infinity();
  double current = 0.0;
  for (const auto& row : csv.rows) {
    if (use_regret) {
      metric.push_back(row[static_cast<std::size_t>(regret_col)]);
      continue;
    }
    if (row[static_cast<std::size_t>(y_col)] > best_y) {
      best_y = row[static_cast<std::size_t>(y_col)];
      Eigen::VectorXd x(dim);
      for (int i = 0; i < dim; ++i) x(i) = row[static_cast<std::size_t>(x0 + i)];
      current = problem.objective(x);
    }
    metric.push_back(current);
  }
  return metric;
}

}  // namespace

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile: empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * (static_cast<double>(values.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double w = pos - static_cast<double>(lo);
  return values[lo] + w * (values[lo + 1] - values[lo]);
}

std::vector<double> metric_series(const problems::Problem& problem, const opt::Trace& trace) {
  std::vector<double> out;
  out.reserve(trace.rows.size());
  if (problem.known_max) {
    for (const auto& row : trace.rows) out.push_back(row.regret);
    return out;
  }
  double best_y = -std::numeric_limits<double>::infinity();
  double current = 0.0;
  for (const auto& row : trace.rows) {
    if (row.y > best_y) {
      best_y = row.y;
      current = problem.objective(row.x);
    }
    out.push_back(current);
  }
  return out;
}

void Summary::write_csv(std::ostream& os) const {
  os << "method,round,mean,ci_lo,ci_hi\n";
  for (const auto& r : rows)
    os << r.label << "," << r.round << "," << opt::format_double(r.mean) << ","
       << opt::format_double(r.ci_lo) << "," << opt::format_double(r.ci_hi) << "\n";
}

Summary summarize(const problems::Problem& problem, const std::vector<TrialResult>& results) {
  // Group metric series by label, preserving first-seen label order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::vector<double>>> by_label;
  for (const auto& r : results) {
    if (!r.trace) continue;
    if (by_label.find(r.label) == by_label.end()) order.push_back(r.label);
    by_label[r.label].push_back(metric_series(problem, *r.trace));
  }

  Summary summary;
  for (const auto& label : order) {
    const auto& series = by_label[label];
    std::size_t rounds = series.front().size();
    for (const auto& s : series) rounds = std::min(rounds, s.size());
    for (std::size_t t = 0; t < rounds; ++t) {
      std::vector<double> sample;
      sample.reserve(series.size());
      for (const auto& s : series) sample.push_back(s[t]);
      Summary::Row row;
      row.label = label;
      row.round = static_cast<int>(t) + 1;
      row.mean = 0.0;
      for (double v : sample) row.mean += v;
      row.mean /= static_cast<double>(sample.size());
      row.ci_lo = percentile(sample, 0.15);
      row.ci_hi = percentile(sample, 0.85);
      summary.rows.push_back(std::move(row));
    }
    for (const auto& s : series) summary.terminal[label].push_back(s.back());
  }
  return summary;
}

ExperimentOutput run_experiment(const ExperimentSpec& spec, bool force, int n_threads) {
  spec.validate();
  const problems::Problem problem = problems::make_problem(spec.problem);

  std::string out_dir = spec.out_dir;
  if (const char* env = std::getenv("LOCBO_OUT"); env != nullptr && *env != '\0')
    out_dir = env;

  const fs::path root(out_dir);
  if (fs::exists(root / "manifest.json") && !force)
    throw std::runtime_error("output directory already holds results (" +
                             (root / "manifest.json").string() + "); pass --force to overwrite");
  fs::create_directories(root / "traces");

  // Resolve configs up front so the manifest can echo them.
  std::vector<opt::BoConfig> method_configs;
  for (const auto& m : spec.methods) {
    opt::BoConfig c = opt::default_config(problem, m.method);
    c = apply_overrides(c, spec.overrides);
    c = apply_overrides(c, m.overrides);
    method_configs.push_back(c);
  }

  struct Task {
    std::size_t method_index;
    int trial;
  };
  std::vector<Task> tasks;
  for (std::size_t m = 0; m < spec.methods.size(); ++m)
    for (int k = 0; k < spec.n_trials; ++k) tasks.push_back({m, k});

  std::vector<TrialResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      TrialResult& res = results[i];
      res.label = spec.methods[task.method_index].label;
      res.trial = task.trial;
      res.seed = spec.base_seed + static_cast<std::uint64_t>(task.trial);
      try {
        opt::BoConfig cfg = method_configs[task.method_index];
        cfg.seed = res.seed;
        opt::Trace trace = opt::run(problem, cfg);
        std::ostringstream csv;
        trace.write_csv(csv);
        write_file(root / trace_csv_name(res.label, task.trial), csv.str());
        write_file(root / trace_json_name(res.label, task.trial), trace.to_json().dump(1));
        res.trace = std::move(trace);
      } catch (const std::exception& e) {
        res.status = e.what();
      }
    }
  };

  int hw = n_threads > 0 ? n_threads : static_cast<int>(std::thread::hardware_concurrency());
  hw = std::clamp(hw, 1, static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int i = 0; i < hw; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  ExperimentOutput out;
  out.trials = results;
  out.out_dir = out_dir;
  out.summary = summarize(problem, results);

  std::ostringstream summary_csv;
  out.summary.write_csv(summary_csv);
  write_file(root / "summary.csv", summary_csv.str());

  nlohmann::json resolved = nlohmann::json::array();
  for (std::size_t m = 0; m < spec.methods.size(); ++m)
    resolved.push_back({{"label", spec.methods[m].label},
                        {"config", config_to_json(method_configs[m])}});
  nlohmann::json trials_json = nlohmann::json::array();
  for (const auto& r : results)
    trials_json.push_back({{"label", r.label},
                           {"trial", r.trial},
                           {"seed", r.seed},
                           {"status", r.status},
                           {"trace_csv", trace_csv_name(r.label, r.trial)}});
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < spec.n_trials; ++k) seeds.push_back(spec.base_seed + k);
  nlohmann::json manifest{{"code_version", kCodeVersion},
                          {"spec", spec.to_json()},
                          {"problem", spec.problem},
                          {"resolved_methods", resolved},
                          {"trial_seeds", seeds},
                          {"trials", trials_json}};
  write_file(root / "manifest.json", manifest.dump(1));
  return out;
}

std::vector<AuditRow> audit_report(const std::string& results_dir) {
  const fs::path root(results_dir);
  std::ifstream mf(root / "manifest.json");
  if (!mf) throw std::runtime_error("no manifest.json under " + results_dir);
  const nlohmann::json manifest = nlohmann::json::parse(mf);

  const problems::Problem problem =
      problems::make_problem(manifest.at("problem").get<std::string>());
  const bool f_known = !problem.observe_override;  // exact objective available
  const double b_xi =
      problem.noise.kind == problems::NoiseKind::none ? 1.0 : 0.5;

  std::map<std::string, nlohmann::json> configs;
  for (const auto& m : manifest.at("resolved_methods"))
    configs[m.at("label").get<std::string>()] = m.at("config");

  std::vector<AuditRow> rows;
  for (const auto& t : manifest.at("trials")) {
    if (t.at("status").get<std::string>() != "ok") continue;
    const std::string label = t.at("label").get<std::string>();
    const nlohmann::json& cfg = configs.at(label);
    const std::string method = cfg.at("method").get<std::string>();
    if (method == "BO" || method == "RS") continue;

    const CsvTrace csv = parse_trace_csv(root / t.at("trace_csv").get<std::string>());
    const int covered_col = csv.column("covered");
    const int lo_col = csv.column("L");
    const int hi_col = csv.column("U");
    const int x0 = csv.column("x0");
    const int dim = problem.box.dim();

    AuditRow row;
    row.label = label;
    row.trial = t.at("trial").get<int>();
    int y_miss = 0, f_miss = 0;
    for (const auto& r : csv.rows) {
      const int covered = static_cast<int>(r[static_cast<std::size_t>(covered_col)]);
      if (covered < 0) continue;  // init phase
      ++row.rounds;
      if (covered == 0) ++y_miss;
      if (f_known) {
        Eigen::VectorXd x(dim);
        for (int i = 0; i < dim; ++i) x(i) = r[static_cast<std::size_t>(x0 + i)];
        const double f = problem.objective(x);
        if (f < r[static_cast<std::size_t>(lo_col)] || f > r[static_cast<std::size_t>(hi_col)])
          ++f_miss;
      }
    }
    if (row.rounds == 0) continue;
    row.y_miss_rate = static_cast<double>(y_miss) / row.rounds;

    conformal::AuditParams ap;
    ap.alpha = cfg.at("alpha").get<double>();
    ap.eta1 = cfg.at("eta1").get<double>();
    ap.reg_lambda = cfg.at("lambda").get<double>();
    ap.kernel.kappa = cfg.at("kappa").get<double>();
    ap.kernel.length = cfg.at("l").is_string() ? std::numeric_limits<double>::infinity()
                                               : cfg.at("l").get<double>();
    if (method == "OCBO") ap.kernel.kappa = 0.0;  // scalar recalibrator
    ap.input_norm_bound = problem.box.diagonal();
    row.y_coverage_bound = ap.alpha + conformal::audit_beta(ap) /
                                      std::sqrt(static_cast<double>(row.rounds)) +
                       ap.kernel.kappa;
    row.bound_ok = row.y_miss_rate <= row.y_coverage_bound;
    row.b_xi = b_xi;
    if (f_known) {
      row.f_miss_rate = static_cast<double>(f_miss) / row.rounds;
      row.f_coverage_bound = row.y_coverage_bound / b_xi;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string audit_table(const std::vector<AuditRow>& rows) {
  std::ostringstream os;
  os << "label,trial,rounds,y_miss_rate,y_coverage_bound,bound_ok,f_miss_rate,f_coverage_bound,b_xi\n";
  for (const auto& r : rows)
    os << r.label << "," << r.trial << "," << r.rounds << ","
       << opt::format_double(r.y_miss_rate) << "," << opt::format_double(r.y_coverage_bound)
       << "," << (r.bound_ok ? 1 : 0) << "," << opt::format_double(r.f_miss_rate) << ","
       << opt::format_double(r.f_coverage_bound) << "," << opt::format_double(r.b_xi) << "\n";
  return os.str();
}

Summary summarize_from_dir(const std::string& results_dir) {
  const fs::path root(results_dir);
  std::ifstream mf(root / "manifest.json");
  if (!mf) throw std::runtime_error("no manifest.json under " + results_dir);
  const nlohmann::json manifest = nlohmann::json::parse(mf);
  const problems::Problem problem =
      problems::make_problem(manifest.at("problem").get<std::string>());

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::vector<double>>> by_label;
  for (const auto& t : manifest.at("trials")) {
    if (t.at("status").get<std::string>() != "ok") continue;
    const std::string label = t.at("label").get<std::string>();
    const CsvTrace csv = parse_trace_csv(root / t.at("trace_csv").get<std::string>());
    if (by_label.find(label) == by_label.end()) order.push_back(label);
    by_label[label].push_back(metric_from_csv(problem, csv));
  }

  Summary summary;
  for (const auto& label : order) {
    const auto& series = by_label[label];
    std::size_t rounds = series.front().size();
    for (const auto& s : series) rounds = std::min(rounds, s.size());
    for (std::size_t t = 0; t < rounds; ++t) {
      std::vector<double> sample;
      for (const auto& s : series) sample.push_back(s[t]);
      Summary::Row row;
      row.label = label;
      row.round = static_cast<int>(t) + 1;
      row.mean = 0.0;
      for (double v : sample) row.mean += v;
      row.mean /= static_cast<double>(sample.size());
      row.ci_lo = percentile(sample, 0.15);
      row.ci_hi = percentile(sample, 0.85);
      summary.rows.push_back(std::move(row));
    }
    for (const auto& s : series) summary.terminal[label].push_back(s.back());
  }
  return summary;
}

}  // namespace locbo::experiment
