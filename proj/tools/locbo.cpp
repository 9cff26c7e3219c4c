#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "locbo/experiment/runner.hpp"
#include "locbo/opt/config.hpp"
#include "locbo/problems/problem.hpp"

namespace {

int cmd_run(const std::string& spec_file, std::optional<std::uint64_t> seed,
            std::optional<int> trials, std::optional<std::string> out, bool force,
            int threads) {
  std::ifstream is(spec_file);
  if (!is) {
    std::cerr << "cannot open spec file: " << spec_file << "\n";
    return 1;
  }
  auto spec = locbo::experiment::ExperimentSpec::from_json(nlohmann::json::parse(is));
  if (seed) spec.base_seed = *seed;
  if (trials) spec.n_trials = *trials;
  if (out) spec.out_dir = *out;

  const auto result = locbo::experiment::run_experiment(spec, force, threads);
  int failures = 0;
  for (const auto& t : result.trials) {
    if (t.status != "ok") {
      ++failures;
      std::cerr << t.label << " trial " << t.trial << " failed: " << t.status << "\n";
    }
  }
  std::cout << "wrote " << result.trials.size() - failures << "/" << result.trials.size()
            << " traces, summary.csv and manifest.json under " << result.out_dir << "\n";
  for (const auto& [label, terminals] : result.summary.terminal) {
    double mean = 0.0;
    for (double v : terminals) mean += v;
    mean /= static_cast<double>(terminals.size());
    std::cout << "  " << label << ": final metric mean "
              << locbo::opt::format_double(mean) << " over " << terminals.size()
              << " trials\n";
  }
  return failures == 0 ? 0 : 1;
}

int cmd_audit(const std::string& results_dir) {
  const auto rows = locbo::experiment::audit_report(results_dir);
  if (rows.empty()) {
    std::cout << "no conformal runs found under " << results_dir << "\n";
    return 0;
  }
  std::cout << locbo::experiment::audit_table(rows);
  bool all_ok = true;
  for (const auto& r : rows) all_ok = all_ok && r.bound_ok;
  std::cout << (all_ok ? "all runs satisfy the coverage bound\n"
                       : "WARNING: coverage bound violated\n");
  return all_ok ? 0 : 1;
}

int cmd_list() {
  std::cout << "problems:\n";
  for (const auto& name : locbo::problems::problem_names()) std::cout << "  " << name << "\n";
  std::cout << "methods:\n";
  for (auto m : {locbo::opt::Method::bo, locbo::opt::Method::ocbo, locbo::opt::Method::ocbo_l,
                 locbo::opt::Method::locbo, locbo::opt::Method::rs})
    std::cout << "  " << locbo::opt::method_name(m) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibrated Bayesian optimization toolkit"};
  app.require_subcommand(1);

  std::string spec_file;
  std::string results_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> out;
  bool force = false;
  int threads = 0;

  auto* run = app.add_subcommand("run", "run an experiment spec (JSON file or manifest)");
  run->add_option("spec", spec_file, "experiment spec file")->required();
  run->add_option("--seed", seed, "override the base seed");
  run->add_option("--trials", trials, "override the trial count");
  run->add_option("--out", out, "override the output directory (LOCBO_OUT also applies)");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");
  run->add_flag("--force", force, "overwrite existing results");

  auto* audit = app.add_subcommand("audit", "coverage audit of a results directory");
  audit->add_option("dir", results_dir, "results directory")->required();

  app.add_subcommand("list", "list registered problems and methods");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("run")) return cmd_run(spec_file, seed, trials, out, force, threads);
    if (app.got_subcommand("audit")) return cmd_audit(results_dir);
    return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
