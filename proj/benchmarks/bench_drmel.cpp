#include <memory>

#include <benchmark/benchmark.h>

#include "drmel/bootstrap.hpp"
#include "drmel/estimators.hpp"
#include "drmel/likelihood.hpp"
#include "drmel/optimizer.hpp"
#include "drmel/rng.hpp"
#include "drmel/scenario.hpp"
#include "drmel/step_cdf.hpp"

using namespace drmel;

namespace {

const ScenarioSpec& spec_for(int id) {
  static const ScenarioSpec gamma = ScenarioSpec::gamma1();
  static const ScenarioSpec normal = ScenarioSpec::normal2();
  return id == 0 ? gamma : normal;
}

std::shared_ptr<const MultiSampleData> dataset(int id) {
  return std::make_shared<const MultiSampleData>(generate(spec_for(id), 1));
}

}  // namespace

static void BM_DualLogel(benchmark::State& state) {
  const auto data = dataset(static_cast<int>(state.range(0)));
  const ParamBlock theta = true_theta(spec_for(static_cast<int>(state.range(0))));
  const auto level = state.range(1) ? Derivatives::Hessian : Derivatives::Gradient;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_dual_logel(theta, *data, level));
}
BENCHMARK(BM_DualLogel)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMicrosecond);

static void BM_FitCold(benchmark::State& state) {
  const auto data = dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_mele(data));
}
BENCHMARK(BM_FitCold)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// One bootstrap replicate: resample plus warm-started refit.
static void BM_BootstrapReplicate(benchmark::State& state) {
  const auto data = dataset(static_cast<int>(state.range(0)));
  const auto fit = fit_mele(data);
  FitOptions opts;
  opts.warm_start = fit.theta_hat;
  RngStream rng(7);
  for (auto _ : state) {
    auto boot = std::make_shared<const MultiSampleData>(resample(*data, rng));
    benchmark::DoNotOptimize(fit_mele(boot, opts));
  }
}
BENCHMARK(BM_BootstrapReplicate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_CdfAndDominance(benchmark::State& state) {
  const auto fit = fit_mele(dataset(0));
  for (auto _ : state) {
    const auto cdfs = cdf_estimates(fit);
    benchmark::DoNotOptimize(dominance_index(cdfs[0], cdfs[4]));
  }
}
BENCHMARK(BM_CdfAndDominance)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
