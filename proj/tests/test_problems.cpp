#include <doctest.h>

#include <cmath>

#include "locbo/problems/problem.hpp"
#include "locbo/problems/synthetic.hpp"

using namespace locbo::problems;
using locbo::math::Rng;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("ackley2d point values") {
  CHECK(ackley2d(vec2(0.0, 0.0)) == doctest::Approx(0.0).epsilon(1e-12));
  // cos(2*pi) cancels e, leaving 20*(exp(-0.2) - 1).
  CHECK(ackley2d(vec2(1.0, 1.0)) ==
        doctest::Approx(20.0 * (std::exp(-0.2) - 1.0)).epsilon(1e-12));
  CHECK(ackley2d(vec2(1.0, 1.0)) == doctest::Approx(-3.62538).epsilon(1e-5));
  CHECK_THROWS_AS(ackley2d(vec2(11.0, 0.0)), std::invalid_argument);
}

TEST_CASE("ackley2d symmetries") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform(-10.0, 10.0);
    const double b = rng.uniform(-10.0, 10.0);
    const double f = ackley2d(vec2(a, b));
    CHECK(f == doctest::Approx(ackley2d(vec2(b, a))).epsilon(1e-12));
    CHECK(f == doctest::Approx(ackley2d(vec2(-a, b))).epsilon(1e-12));
    CHECK(f <= 1e-12);  // maximum at the origin
  }
}

TEST_CASE("synthetic1d values and frozen optimum") {
  CHECK(synthetic1d(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double x = M_PI / 4.0;
  CHECK(synthetic1d(x) ==
        doctest::Approx(x * std::sin(2.0 * x) + std::cos(M_PI * x)).epsilon(1e-15));
  CHECK_THROWS_AS(synthetic1d(5.5), std::invalid_argument);

  // The frozen maximum is consistent and locally stationary.
  CHECK(synthetic1d(kSynthetic1dArgmax) == doctest::Approx(kSynthetic1dMax).epsilon(1e-12));
  const double h = 1e-5;
  CHECK(synthetic1d(kSynthetic1dArgmax + h) < kSynthetic1dMax);
  CHECK(synthetic1d(kSynthetic1dArgmax - h) < kSynthetic1dMax);
}

TEST_CASE("heteroscedastic variance functions") {
  CHECK(hetero_noise_ackley(vec2(0.0, 0.0)) == doctest::Approx(0.5));
  CHECK(hetero_noise_ackley(vec2(10.0, 0.0)) == doctest::Approx(1.0));
  CHECK(hetero_noise_ackley(vec2(3.0, 4.0)) > hetero_noise_ackley(vec2(3.0, 0.0)));
  CHECK(hetero_noise_1d(0.0) == doctest::Approx(0.1));
  CHECK(hetero_noise_1d(5.0) == doctest::Approx(0.6));
  CHECK(hetero_noise_1d(-2.0) == doctest::Approx(hetero_noise_1d(2.0)));
}

TEST_CASE("observe respects the noise model") {
  Rng rng(9);
  auto noiseless = make_problem("ackley2d");
  const Eigen::VectorXd x = vec2(1.0, -2.0);
  CHECK(noiseless.observe(x, rng) == noiseless.objective(x));

  auto noisy = make_problem("ackley2d-hetero");
  const double f = noisy.objective(x);
  const double var = hetero_noise_ackley(x);
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = noisy.observe(x, rng);
    sum += y;
    sumsq += (y - f) * (y - f);
  }
  const double mean = sum / n;
  CHECK(std::fabs(mean - f) < 4.0 * std::sqrt(var) / std::sqrt(static_cast<double>(n)));
  CHECK(std::fabs(sumsq / n - var) / var < 0.05);
}

TEST_CASE("observe rejects out-of-box queries") {
  Rng rng(1);
  auto p = make_problem("synthetic1d");
  Eigen::VectorXd x(1);
  x << 7.0;
  CHECK_THROWS_AS(p.observe(x, rng), std::invalid_argument);
}

TEST_CASE("registry round trip and validation") {
  const auto names = problem_names();
  CHECK(names.size() == 5);
  for (const auto& name : {"ackley2d", "ackley2d-hetero", "synthetic1d-hetero"}) {
    const auto p = make_problem(name);
    CHECK(p.name == name);
    CHECK(p.known_max.has_value());
  }
  CHECK_THROWS_AS(make_problem("nope"), std::invalid_argument);

  // Brute-force probe of the declared maxima (reduced probe per test run;
  // the acceptance suite runs the full-size probe).
  validate_known_max(make_problem("ackley2d"), 200000);
  validate_known_max(make_problem("synthetic1d"), 200000);
}

TEST_CASE("noise sign symmetry estimates b_xi = 0.5") {
  Rng rng(12);
  auto p = make_problem("ackley2d-hetero");
  const int n = 100000;
  for (const auto& x : {vec2(0.0, 0.0), vec2(5.0, -5.0)}) {
    const double f = p.objective(x);
    int pos = 0;
    for (int i = 0; i < n; ++i)
      if (p.observe(x, rng) - f >= 0.0) ++pos;
    const double frac = static_cast<double>(pos) / n;
    const double b_hat = std::min(frac, 1.0 - frac);
    CHECK(std::fabs(b_hat - 0.5) <= 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
  }
}
