#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "locbo/gp/fit.hpp"
#include "locbo/gp/model.hpp"
#include "locbo/math/rng.hpp"

using locbo::gp::Dataset;
using locbo::gp::GpModel;
using locbo::gp::KernelParams;
using locbo::gp::matern52;
using locbo::math::Rng;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

Dataset random_dataset(int t, int d, Rng& rng, double span = 5.0) {
  Eigen::MatrixXd x(t, d);
  Eigen::VectorXd y(t);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = rng.uniform(-span, span);
    y(i) = rng.uniform(-2.0, 2.0);
  }
  return {x, y};
}

// Dense-solve reference: no Cholesky cache, plain LU solves.
locbo::gp::PredictiveNormal dense_posterior(const KernelParams& p, const Dataset& data,
                                            const Eigen::VectorXd& q) {
  const Eigen::Index t = data.size();
  Eigen::MatrixXd k(t, t);
  for (Eigen::Index i = 0; i < t; ++i)
    for (Eigen::Index j = 0; j < t; ++j)
      k(i, j) = matern52(data.inputs.row(i), data.inputs.row(j), p);
  k.diagonal().array() += p.noise_variance;
  Eigen::VectorXd kq(t);
  for (Eigen::Index i = 0; i < t; ++i) kq(i) = matern52(data.inputs.row(i), q, p);
  const Eigen::MatrixXd kinv = k.fullPivLu().inverse();
  const double mean = kq.dot(kinv * data.observations);
  const double var = matern52(q, q, p) - kq.dot(kinv * kq);
  return {mean, std::max(0.0, var)};
}

}  // namespace

TEST_CASE("matern52 point values") {
  KernelParams p{1.0, 0.1, 1.0};
  CHECK(matern52(vec1(0.0), vec1(0.0), p) == doctest::Approx(1.0).epsilon(1e-15));
  // r = 1: (1 + sqrt5 + 5/3) exp(-sqrt5)
  const double expected = (1.0 + std::sqrt(5.0) + 5.0 / 3.0) * std::exp(-std::sqrt(5.0));
  CHECK(matern52(vec1(0.0), vec1(1.0), p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.52399).epsilon(1e-4));
  CHECK_THROWS_AS(matern52(vec1(std::nan("")), vec1(0.0), p), std::invalid_argument);
}

TEST_CASE("matern52 symmetry and range") {
  Rng rng(11);
  KernelParams p{2.5, 0.1, 1.7};
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd a(3), b(3);
    for (int j = 0; j < 3; ++j) {
      a(j) = rng.uniform(-5.0, 5.0);
      b(j) = rng.uniform(-5.0, 5.0);
    }
    const double kab = matern52(a, b, p);
    CHECK(kab == matern52(b, a, p));
    CHECK(kab > 0.0);
    CHECK(kab <= p.output_scale);
  }
}

TEST_CASE("posterior recovers the prior on an empty dataset") {
  GpModel model({1.3, 0.2, 2.0}, Dataset{});
  const auto p = model.posterior(vec1(0.7));
  CHECK(p.mean == 0.0);
  CHECK(p.variance == doctest::Approx(2.0).epsilon(1e-14));
  const auto obs = model.predictive_observation(vec1(0.7));
  CHECK(obs.variance == doctest::Approx(2.2).epsilon(1e-14));
}

TEST_CASE("posterior on one point matches the 1x1 formula") {
  Dataset data(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1));
  GpModel model({1.0, 0.1, 1.0}, data);
  const auto p = model.posterior(vec1(0.0));
  CHECK(p.mean == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
  CHECK(p.variance == doctest::Approx(1.0 - 1.0 / 1.1).epsilon(1e-12));
  const auto obs = model.predictive_observation(vec1(0.0));
  CHECK(obs.variance == doctest::Approx(p.variance + 0.1).epsilon(1e-12));
}

TEST_CASE("noiseless limit interpolates the data") {
  Rng rng(3);
  auto data = random_dataset(8, 1, rng);
  GpModel model({1.5, 1e-10, 1.0}, data);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const auto p = model.posterior(data.inputs.row(i).transpose());
    CHECK(p.mean == doctest::Approx(data.observations(i)).epsilon(1e-4));
  }
}

TEST_CASE("posterior matches the dense-solve oracle") {
  Rng rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const int t = 1 + static_cast<int>(rng.uniform() * 50);
    const int d = 1 + static_cast<int>(rng.uniform() * 3);
    const auto data = random_dataset(t, d, rng);
    KernelParams p{rng.uniform(0.5, 3.0), rng.uniform(0.01, 0.5), rng.uniform(0.5, 2.0)};
    GpModel model(p, data);
    Eigen::VectorXd q(d);
    for (int j = 0; j < d; ++j) q(j) = rng.uniform(-5.0, 5.0);
    const auto got = model.posterior(q);
    const auto want = dense_posterior(p, data, q);
    CHECK(got.mean == doctest::Approx(want.mean).epsilon(1e-8));
    CHECK(got.variance == doctest::Approx(want.variance).epsilon(1e-8));
  }
}

TEST_CASE("factorization reproduces the gram matrix") {
  Rng rng(23);
  const auto data = random_dataset(30, 2, rng);
  GpModel model({2.0, 0.05, 1.0}, data);
  CHECK(model.factorization_residual() < 1e-8);
}

TEST_CASE("posterior variance shrinks when conditioning on the query point") {
  Rng rng(29);
  KernelParams p{1.0, 0.1, 1.0};
  auto data = random_dataset(10, 2, rng);
  GpModel before(p, data);
  Eigen::VectorXd q(2);
  q << 0.3, -0.4;
  const double var_before = before.posterior(q).variance;
  data.add(q, 0.5);
  GpModel after(p, data);
  CHECK(after.posterior(q).variance <= var_before + 1e-12);
}

TEST_CASE("condition_one_point base case and oracle") {
  KernelParams p{1.0, 0.1, 1.0};
  GpModel empty(p, Dataset{});
  const auto c0 = empty.condition_one_point(vec1(0.2));
  CHECK(c0.a == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
  CHECK(c0.b == doctest::Approx(0.0).epsilon(1e-15));

  // Re-conditioning oracle: a fresh model on data + (x, y') must give
  // posterior mean a*y' + b and variance var_plus.
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    const int t = static_cast<int>(rng.uniform() * 12);
    const int d = 1 + static_cast<int>(rng.uniform() * 2);
    auto data = random_dataset(t, d, rng);
    KernelParams kp{rng.uniform(0.5, 2.5), rng.uniform(0.02, 0.4), rng.uniform(0.5, 2.0)};
    GpModel model(kp, data, 0.0);
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x(j) = rng.uniform(-5.0, 5.0);
    const auto c = model.condition_one_point(x);

    const double y_prime = rng.uniform(-3.0, 3.0);
    auto extended = data;
    if (extended.empty()) extended = Dataset(Eigen::MatrixXd(0, d), Eigen::VectorXd(0));
    extended.add(x, y_prime);
    GpModel fresh(kp, extended, 0.0);
    const auto post = fresh.posterior(x);
    CHECK(post.mean == doctest::Approx(c.a * y_prime + c.b).epsilon(1e-7));
    CHECK(post.variance == doctest::Approx(c.var_plus).epsilon(1e-6));
    CHECK(c.var_plus < model.predictive_observation(x).variance);
  }
}

TEST_CASE("linearity of the conditioned mean in y'") {
  KernelParams p{1.2, 0.15, 1.0};
  Rng rng(37);
  auto data = random_dataset(6, 1, rng);
  GpModel model(p, data, 0.0);
  const Eigen::VectorXd x = vec1(0.77);
  const auto c = model.condition_one_point(x);
  for (double y_prime : {0.0, 1.0}) {
    auto extended = data;
    extended.add(x, y_prime);
    GpModel fresh(p, extended, 0.0);
    CHECK(fresh.posterior(x).mean ==
          doctest::Approx(c.a * y_prime + c.b).epsilon(1e-9));
  }
}

TEST_CASE("mean offset centers and un-centers predictions") {
  Rng rng(41);
  auto data = random_dataset(12, 1, rng);
  data.observations.array() += 25.0;  // far from zero
  GpModel centered = GpModel::with_centered_mean({1.0, 0.1, 1.0}, data);
  CHECK(centered.mean_offset() == doctest::Approx(data.observations.mean()));
  // Far from the data the posterior falls back to the offset, not to zero.
  const auto far = centered.posterior(vec1(400.0));
  CHECK(far.mean == doctest::Approx(centered.mean_offset()).epsilon(1e-6));
}

TEST_CASE("fit improves the likelihood and recovers the length scale") {
  // Sample a function from a known GP and refit.
  Rng rng(43);
  const int n = 50;
  Eigen::MatrixXd x(n, 1);
  for (int i = 0; i < n; ++i) x(i, 0) = rng.uniform(-5.0, 5.0);
  KernelParams truth{2.0, 0.1, 1.0};
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k(i, j) = matern52(x.row(i), x.row(j), truth);
  k.diagonal().array() += 1e-10;
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = rng.normal();
  Eigen::VectorXd f = llt.matrixL() * z;
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = f(i) + std::sqrt(truth.noise_variance) * rng.normal();
  Dataset data(x, y);

  KernelParams init{0.5, 0.5, 0.5};
  locbo::gp::FitBounds bounds;
  bounds.length_lo = 0.05;
  bounds.length_hi = 50.0;
  bounds.noise_lo = 1e-4;
  bounds.noise_hi = 10.0;
  bounds.scale_lo = 0.05;
  bounds.scale_hi = 20.0;
  const auto fit = locbo::gp::fit_hyperparameters(data, init, bounds, {.seed = 5});

  const double init_ll = GpModel(init, data).log_marginal_likelihood();
  CHECK(fit.log_likelihood >= init_ll - 1e-9);
  CHECK(!fit.degraded);
  CHECK(fit.params.length_scale > truth.length_scale / 2.0);
  CHECK(fit.params.length_scale < truth.length_scale * 2.0);
}

TEST_CASE("fit on a single point stays inside the bounds") {
  Dataset data(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1));
  locbo::gp::FitBounds bounds;
  const auto fit = locbo::gp::fit_hyperparameters(data, {1.0, 0.1, 1.0}, bounds, {.seed = 1});
  CHECK(fit.params.length_scale >= bounds.length_lo);
  CHECK(fit.params.length_scale <= bounds.length_hi);
  CHECK(fit.params.noise_variance >= bounds.noise_lo);
  CHECK(fit.params.noise_variance <= bounds.noise_hi);
}

TEST_CASE("fit is deterministic for a fixed seed") {
  Rng rng(47);
  const auto data = random_dataset(20, 1, rng);
  locbo::gp::FitBounds bounds;
  const auto a = locbo::gp::fit_hyperparameters(data, {1.0, 0.1, 1.0}, bounds, {.seed = 9});
  const auto b = locbo::gp::fit_hyperparameters(data, {1.0, 0.1, 1.0}, bounds, {.seed = 9});
  CHECK(a.params.length_scale == b.params.length_scale);
  CHECK(a.params.noise_variance == b.params.noise_variance);
  CHECK(a.params.output_scale == b.params.output_scale);
}
