#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "locbo/experiment/runner.hpp"

using namespace locbo::experiment;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ExperimentSpec tiny_spec(const std::string& out_dir) {
  ExperimentSpec spec = ExperimentSpec::from_json(nlohmann::json{
      {"problem", "ackley2d-hetero"},
      {"methods",
       {"RS",
        nlohmann::json{{"name", "LOCBO"},
                       {"label", "LOCBO-sm"},
                       {"overrides", {{"n_candidates", 16}, {"n_mc", 32}}}}}},
      {"overrides", {{"T", 4}, {"n_init", 2}}},
      {"n_trials", 2},
      {"base_seed", 5},
      {"out_dir", out_dir}});
  return spec;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("spec parsing and overrides") {
  const auto spec = tiny_spec("unused");
  CHECK(spec.problem == "ackley2d-hetero");
  REQUIRE(spec.methods.size() == 2);
  CHECK(spec.methods[0].label == "RS");
  CHECK(spec.methods[1].label == "LOCBO-sm");

  auto p = locbo::problems::make_problem(spec.problem);
  auto base = locbo::opt::default_config(p, spec.methods[1].method);
  auto cfg = apply_overrides(base, spec.overrides);
  cfg = apply_overrides(cfg, spec.methods[1].overrides);
  CHECK(cfg.horizon == 4);
  CHECK(cfg.n_init == 2);
  CHECK(cfg.n_candidates == 16);

  CHECK_THROWS_AS(apply_overrides(base, {{"nope", 1}}), std::invalid_argument);
  auto inf_cfg = apply_overrides(base, {{"l", "inf"}});
  CHECK(std::isinf(inf_cfg.loc_length));
}

TEST_CASE("percentile definition") {
  CHECK(percentile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.5) == doctest::Approx(3.0));
  CHECK(percentile({1.0, 2.0, 3.0, 4.0}, 0.15) == doctest::Approx(1.45).epsilon(1e-12));
  CHECK(percentile({7.0, 7.0, 7.0}, 0.85) == doctest::Approx(7.0));  // zero-width CI
  CHECK(percentile({3.0, 1.0}, 1.0) == doctest::Approx(3.0));
}

TEST_CASE("run_experiment persists traces, summary and manifest") {
  TempDir dir("locbo_test_exp");
  const auto spec = tiny_spec(dir.path.string());
  const auto out = run_experiment(spec, false, 2);

  CHECK(out.trials.size() == 4);
  for (const auto& t : out.trials) CHECK(t.status == "ok");
  CHECK(fs::exists(dir.path / "manifest.json"));
  CHECK(fs::exists(dir.path / "summary.csv"));
  CHECK(fs::exists(dir.path / "traces" / "RS_trial0.csv"));
  CHECK(fs::exists(dir.path / "traces" / "LOCBO-sm_trial1.json"));

  // Summary rows: 2 labels x 6 rounds; terminal values per label: 2 trials.
  CHECK(out.summary.rows.size() == 12);
  CHECK(out.summary.terminal.at("RS").size() == 2);

  // Without --force a re-run refuses to overwrite.
  CHECK_THROWS(run_experiment(spec, false, 2));

  // Re-running with force is byte-identical.
  const std::string manifest_before = read_file(dir.path / "manifest.json");
  const std::string summary_before = read_file(dir.path / "summary.csv");
  const std::string trace_before = read_file(dir.path / "traces" / "LOCBO-sm_trial0.csv");
  run_experiment(spec, true, 4);
  CHECK(read_file(dir.path / "manifest.json") == manifest_before);
  CHECK(read_file(dir.path / "summary.csv") == summary_before);
  CHECK(read_file(dir.path / "traces" / "LOCBO-sm_trial0.csv") == trace_before);

  // Re-running FROM the manifest reproduces everything too.
  const auto from_manifest = ExperimentSpec::from_json(
      nlohmann::json::parse(read_file(dir.path / "manifest.json")));
  run_experiment(from_manifest, true, 1);
  CHECK(read_file(dir.path / "manifest.json") == manifest_before);
  CHECK(read_file(dir.path / "summary.csv") == summary_before);

  // Summary recomputed from the raw CSVs matches the persisted one.
  const Summary recomputed = summarize_from_dir(dir.path.string());
  REQUIRE(recomputed.rows.size() == out.summary.rows.size());
  for (std::size_t i = 0; i < recomputed.rows.size(); ++i) {
    CHECK(recomputed.rows[i].label == out.summary.rows[i].label);
    CHECK(recomputed.rows[i].mean ==
          doctest::Approx(out.summary.rows[i].mean).epsilon(1e-12));
    CHECK(recomputed.rows[i].ci_lo ==
          doctest::Approx(out.summary.rows[i].ci_lo).epsilon(1e-12));
    CHECK(recomputed.rows[i].ci_hi ==
          doctest::Approx(out.summary.rows[i].ci_hi).epsilon(1e-12));
  }

  // Audit table covers the conformal method only.
  const auto audit = audit_report(dir.path.string());
  REQUIRE(audit.size() == 2);  // LOCBO-sm x 2 trials
  for (const auto& row : audit) {
    CHECK(row.label == "LOCBO-sm");
    CHECK(row.rounds == 4);
    CHECK(row.y_miss_rate >= 0.0);
    CHECK(row.y_miss_rate <= 1.0);
    CHECK(row.bound_ok);           // bound is loose at this horizon
    CHECK(row.b_xi == 0.5);        // Gaussian noise
    CHECK(row.f_coverage_bound == doctest::Approx(row.y_coverage_bound / 0.5));
    CHECK(std::isfinite(row.f_miss_rate));
  }
}

TEST_CASE("audit on a noiseless problem has equal y and f miscoverage") {
  TempDir dir("locbo_test_noiseless_audit");
  const auto spec = ExperimentSpec::from_json(nlohmann::json{
      {"problem", "ackley2d"},
      {"methods",
       {nlohmann::json{{"name", "LOCBO"},
                       {"overrides", {{"n_candidates", 16}, {"n_mc", 32}}}}}},
      {"overrides", {{"T", 6}, {"n_init", 2}}},
      {"n_trials", 2},
      {"base_seed", 3},
      {"out_dir", dir.path.string()}});
  run_experiment(spec, true, 2);
  const auto audit = audit_report(dir.path.string());
  REQUIRE(audit.size() == 2);
  for (const auto& row : audit) {
    CHECK(row.f_miss_rate == row.y_miss_rate);  // y = f exactly
    CHECK(row.b_xi == 1.0);                     // zero noise has both signs surely
  }
}

TEST_CASE("unknown problem produces a helpful error") {
  ExperimentSpec spec = tiny_spec("unused2");
  spec.problem = "bogus";
  try {
    run_experiment(spec, true, 1);
    FAIL("expected an exception");
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    CHECK(msg.find("ackley2d") != std::string::npos);  // lists the registry
  }
}

TEST_CASE("failed trials are recorded while others proceed") {
  TempDir dir("locbo_test_fail");
  ExperimentSpec spec = tiny_spec(dir.path.string());
  // Make the LOCBO variant invalid (eta1 >= 1/lambda) so its runs fail.
  spec.methods[1].overrides["eta1"] = 1000.0;
  const auto out = run_experiment(spec, true, 2);
  int ok = 0, failed = 0;
  for (const auto& t : out.trials) {
    if (t.status == "ok")
      ++ok;
    else
      ++failed;
  }
  CHECK(ok == 2);
  CHECK(failed == 2);
  CHECK(out.summary.terminal.count("RS") == 1);
  CHECK(out.summary.terminal.count("LOCBO-sm") == 0);
}
