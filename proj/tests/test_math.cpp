#include <doctest.h>

#include <cmath>

#include "locbo/math/normal.hpp"
#include "locbo/math/quadrature.hpp"
#include "locbo/math/rng.hpp"

using namespace locbo::math;

TEST_CASE("normal quantile inverts the cdf") {
  for (double p : {1e-12, 1e-6, 0.01, 0.025, 0.2, 0.5, 0.8, 0.975, 0.99, 1.0 - 1e-9}) {
    const double z = norm_quantile(p);
    CHECK(norm_cdf(z) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK(norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(norm_cquantile(0.025) == doctest::Approx(1.959963985).epsilon(1e-8));
  CHECK(std::isinf(norm_quantile(0.0)));
  CHECK(std::isinf(norm_quantile(1.0)));
}

TEST_CASE("normal quantile handles deep tails") {
  for (double p : {1e-30, 1e-100, 1e-250}) {
    const double z = norm_quantile(p);
    CHECK(z < 0.0);
    // Compare log-densities: log Phi(z) ~ log p.
    CHECK(std::log(norm_cdf(z)) == doctest::Approx(std::log(p)).epsilon(1e-6));
  }
}

TEST_CASE("ccdf symmetry") {
  for (double z : {-3.0, -1.0, 0.0, 0.7, 2.5}) {
    CHECK(norm_ccdf(z) == doctest::Approx(1.0 - norm_cdf(z)).epsilon(1e-14));
    CHECK(norm_ccdf(z) == doctest::Approx(norm_cdf(-z)).epsilon(1e-14));
  }
}

TEST_CASE("adaptive quadrature on smooth integrands") {
  const auto gauss = integrate_adaptive([](double x) { return norm_pdf(x); }, -10.0, 10.0);
  CHECK(gauss.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gauss.converged);

  const auto poly = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(poly.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("segment-aware quadrature handles a discontinuous density") {
  // Flat on [-1, 1] with Gaussian tails, normalized by construction.
  const double inside = 0.8 / 2.0;
  const double tail_mass = 2.0 * norm_ccdf(1.0);
  auto pdf = [&](double y) {
    if (y >= -1.0 && y <= 1.0) return inside;
    return 0.2 * norm_pdf(y) / tail_mass;
  };
  const auto r = integrate_segments(pdf, {-12.0, -1.0, 1.0, 12.0}, 1e-10, 1e-12);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("rng streams are deterministic and well scaled") {
  Rng a = Rng::substream(42, {1, 2});
  Rng b = Rng::substream(42, {1, 2});
  Rng c = Rng::substream(42, {1, 3});
  bool diverged = false;
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    if (u != c.uniform()) diverged = true;
  }
  CHECK(diverged);
}

TEST_CASE("rng normal moments") {
  Rng rng(7);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.0).epsilon(0.02));
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}
