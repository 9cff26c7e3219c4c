#include <doctest.h>

#include <cmath>
#include <sstream>

#include "locbo/opt/run.hpp"

using namespace locbo::opt;
using locbo::math::Rng;
using locbo::problems::make_problem;

namespace {

BoConfig small_config(const locbo::problems::Problem& p, Method m, std::uint64_t seed) {
  BoConfig c = default_config(p, m);
  c.method = m;
  c.horizon = 8;
  c.n_init = 3;
  c.n_candidates = 32;
  c.n_mc = 64;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("select_candidate basics") {
  locbo::problems::Box box = locbo::problems::Box::cube(2, -1.0, 1.0);

  SUBCASE("single draw wins regardless of value") {
    Rng rng(1);
    const auto c = select_candidate([](const Eigen::VectorXd&, int) { return -5.0; }, box, 1, rng);
    CHECK(c.index == 0);
    CHECK(box.contains(c.x));
  }

  SUBCASE("constant acquisition keeps the first draw") {
    Rng rng(2);
    const auto c = select_candidate([](const Eigen::VectorXd&, int) { return 1.0; }, box, 64, rng);
    CHECK(c.index == 0);
  }

  SUBCASE("distance acquisition finds the target") {
    Eigen::VectorXd target(2);
    target << 0.3, -0.2;
    Rng rng(3);
    const auto c = select_candidate(
        [&](const Eigen::VectorXd& x, int) { return -(x - target).norm(); }, box, 10000, rng);
    CHECK((c.x - target).norm() < 0.05 * box.diagonal());
  }
}

TEST_CASE("random search produces n_init + T uniform queries") {
  auto p = make_problem("ackley2d");
  BoConfig c = small_config(p, Method::rs, 7);
  c.horizon = 10;
  const Trace trace = run(p, c);
  REQUIRE(trace.rows.size() == 13);
  double best = -1e300;
  for (const auto& row : trace.rows) {
    CHECK(p.box.contains(row.x));
    best = std::max(best, row.y);
    CHECK(row.incumbent == doctest::Approx(best));
    CHECK(row.covered == -1);
    CHECK(std::isnan(row.lambda));
  }
  CHECK(trace.conformal_state.empty());
}

TEST_CASE("runs are deterministic per seed") {
  auto p = make_problem("ackley2d-hetero");
  for (Method m : {Method::bo, Method::ocbo, Method::ocbo_l, Method::locbo}) {
    const Trace a = run(p, small_config(p, m, 11));
    const Trace b = run(p, small_config(p, m, 11));
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].x == b.rows[i].x);
      CHECK(a.rows[i].y == b.rows[i].y);
      if (!std::isnan(a.rows[i].acq)) CHECK(a.rows[i].acq == b.rows[i].acq);
    }
  }
}

TEST_CASE("incumbent and terminal query follow the observed maximum") {
  auto p = make_problem("ackley2d-hetero");
  const Trace trace = run(p, small_config(p, Method::locbo, 13));
  double best = -1e300;
  Eigen::VectorXd x_best;
  for (const auto& row : trace.rows) {
    if (row.y > best) {
      best = row.y;
      x_best = row.x;
    }
    CHECK(row.incumbent == doctest::Approx(best));
  }
  CHECK(trace.y_best == doctest::Approx(best));
  CHECK(trace.x_hat == x_best);
}

TEST_CASE("algorithm ordering: intervals come from the pre-observation state") {
  // The recorded interval at round t must contain y_t if and only if the
  // covered flag says so, and the incumbent used by the acquisition lags
  // the observation.
  auto p = make_problem("ackley2d-hetero");
  const Trace trace = run(p, small_config(p, Method::locbo, 17));
  for (std::size_t i = static_cast<std::size_t>(trace.n_init); i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    const bool inside = row.lower <= row.y && row.y <= row.upper;
    CHECK(inside == (row.covered == 1));
    CHECK(std::isfinite(row.acq));
  }
}

TEST_CASE("BO rows carry no conformal state") {
  auto p = make_problem("ackley2d");
  const Trace trace = run(p, small_config(p, Method::bo, 19));
  for (const auto& row : trace.rows) {
    CHECK(std::isnan(row.lower));
    CHECK(std::isnan(row.upper));
    CHECK(std::isnan(row.lambda));
    CHECK(row.covered == -1);
  }
  CHECK(trace.conformal_state.empty());
}

TEST_CASE("LOCBO run records usable conformal state") {
  auto p = make_problem("ackley2d-hetero");
  const Trace trace = run(p, small_config(p, Method::locbo, 23));
  CHECK(!trace.conformal_state.empty());
  int covered = 0, missed = 0;
  for (std::size_t i = static_cast<std::size_t>(trace.n_init); i < trace.rows.size(); ++i) {
    if (trace.rows[i].covered == 1) ++covered;
    if (trace.rows[i].covered == 0) ++missed;
  }
  CHECK(covered + missed == trace.config.horizon);
}

TEST_CASE("simple regret series") {
  auto p = make_problem("ackley2d");
  const Trace trace = run(p, small_config(p, Method::rs, 29));
  const auto regret = simple_regret_series(p, trace);
  REQUIRE(regret.size() == trace.rows.size());
  for (std::size_t i = 0; i < regret.size(); ++i) {
    CHECK(regret[i] >= 0.0);
    CHECK(regret[i] == doctest::Approx(trace.rows[i].regret).epsilon(1e-12));
    if (i > 0) CHECK(regret[i] <= regret[i - 1] + 1e-12);  // noiseless: non-increasing
  }

  auto rrm = make_problem("rrm-uav");
  CHECK_THROWS_AS(simple_regret_series(rrm, trace), std::invalid_argument);
}

TEST_CASE("regret when querying a fixed corner") {
  auto p = make_problem("ackley2d");
  Eigen::VectorXd corner(2);
  corner << 10.0, 10.0;
  // A trace that only ever saw the corner has regret |f(corner)|.
  Trace trace;
  trace.problem = p.name;
  trace.config = default_config(p, Method::rs);
  trace.n_init = 1;
  TraceRow row;
  row.t = 1;
  row.x = corner;
  row.y = 0.0;
  trace.rows.push_back(row);
  const auto regret = simple_regret_series(p, trace);
  CHECK(regret[0] == doctest::Approx(std::fabs(p.objective(corner))).epsilon(1e-12));
}

TEST_CASE("utility guarantee diagnostic") {
  auto p = make_problem("ackley2d-hetero");
  const Trace trace = run(p, small_config(p, Method::locbo, 31));
  const auto report = utility_guarantee_diagnostic(p, trace, 0.5, 0.5);
  CHECK(report.rounds == trace.config.horizon);
  CHECK(report.fraction >= 0.0);
  CHECK(report.fraction <= 1.0);
  CHECK(report.floor <= 1.0);

  const Trace bo_trace = run(p, small_config(p, Method::bo, 31));
  CHECK_THROWS_AS(utility_guarantee_diagnostic(p, bo_trace, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("trace CSV shape") {
  auto p = make_problem("synthetic1d-hetero");
  const Trace trace = run(p, small_config(p, Method::locbo, 37));
  std::ostringstream os;
  trace.write_csv(os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "t,x0,y,L,U,lambda,covered,acq,incumbent,regret");
  int rows = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == static_cast<int>(trace.rows.size()));
}

TEST_CASE("LOCBO dominates random search on the noiseless 1d objective") {
  auto p = make_problem("synthetic1d");
  std::vector<double> locbo_finals, rs_finals;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    BoConfig locbo_cfg = default_config(p, Method::locbo);
    locbo_cfg.horizon = 50;
    locbo_cfg.seed = seed;
    locbo_finals.push_back(run(p, locbo_cfg).rows.back().regret);
    BoConfig rs_cfg = default_config(p, Method::rs);
    rs_cfg.horizon = 50;
    rs_cfg.seed = seed;
    rs_finals.push_back(run(p, rs_cfg).rows.back().regret);
  }
  auto med = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(med(locbo_finals) < med(rs_finals));
}

TEST_CASE("config validation") {
  auto p = make_problem("ackley2d");
  BoConfig c = default_config(p, Method::locbo);
  c.alpha = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = default_config(p, Method::locbo);
  c.eta1 = 300.0;  // violates eta1 < 1/lambda with lambda = 4e-3
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = default_config(p, Method::locbo);
  c.horizon = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
