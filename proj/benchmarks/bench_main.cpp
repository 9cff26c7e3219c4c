#include <benchmark/benchmark.h>

#include "locbo/cal/posterior.hpp"
#include "locbo/gp/fit.hpp"
#include "locbo/math/rng.hpp"
#include "locbo/problems/problem.hpp"
#include "locbo/rrm/sim.hpp"

namespace {

using locbo::math::Rng;

locbo::gp::Dataset random_dataset(int t, int d, Rng& rng) {
  Eigen::MatrixXd x(t, d);
  Eigen::VectorXd y(t);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = rng.uniform(-10.0, 10.0);
    y(i) = rng.normal();
  }
  return {x, y};
}

void BM_GpPosterior(benchmark::State& state) {
  Rng rng(1);
  const int t = static_cast<int>(state.range(0));
  const locbo::gp::GpModel model({3.0, 0.1, 1.0}, random_dataset(t, 2, rng));
  Eigen::VectorXd q(2);
  q << 1.0, -2.0;
  for (auto _ : state) {
    auto p = model.posterior(q);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_GpPosterior)->Arg(10)->Arg(50)->Arg(150);

void BM_GpFactorize(benchmark::State& state) {
  Rng rng(2);
  const int t = static_cast<int>(state.range(0));
  const auto data = random_dataset(t, 2, rng);
  for (auto _ : state) {
    locbo::gp::GpModel model({3.0, 0.1, 1.0}, data);
    benchmark::DoNotOptimize(model.applied_jitter());
  }
}
BENCHMARK(BM_GpFactorize)->Arg(10)->Arg(50)->Arg(150);

void BM_CalibratedPosteriorPdf(benchmark::State& state) {
  const locbo::gp::PredictiveNormal pred{0.3, 1.2};
  const auto cl = locbo::cal::CalibratedLikelihood::from_threshold(pred, 0.25, 0.2);
  const locbo::cal::CalibratedPosterior cp({0.7, 0.09, 0.4}, cl, false);
  double f = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cp.pdf_closed_form(f));
    f += 1e-4;
  }
}
BENCHMARK(BM_CalibratedPosteriorPdf);

void BM_AcquisitionEi(benchmark::State& state) {
  const locbo::gp::PredictiveNormal pred{0.3, 1.2};
  const auto cl = locbo::cal::CalibratedLikelihood::from_threshold(pred, 0.25, 0.2);
  const locbo::cal::CalibratedPosterior cp({0.7, 0.09, 0.4}, cl, false);
  const int n_mc = static_cast<int>(state.range(0));
  std::uint64_t round = 0;
  for (auto _ : state) {
    Rng rng = Rng::substream(7, {round++});
    benchmark::DoNotOptimize(locbo::cal::acquisition_ei(cp, 0.5, n_mc, rng));
  }
}
BENCHMARK(BM_AcquisitionEi)->Arg(256)->Arg(4096);

void BM_RrmObserve(benchmark::State& state) {
  const auto layout = locbo::rrm::make_layout(7);
  const auto config = locbo::rrm::RadioConfig::uniform(layout, 30.0, -10.0);
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(locbo::rrm::noisy_observe(layout, config, 1, rng));
  }
}
BENCHMARK(BM_RrmObserve);

}  // namespace

BENCHMARK_MAIN();
