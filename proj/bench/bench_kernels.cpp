// Serial reference kernels against their OpenMP counterparts on the indoor
// scenario. Thread count follows ISAC_DEPLOY_THREADS or the OpenMP default.

#include <benchmark/benchmark.h>

#include "isac/correlation.hpp"
#include "isac/geometry.hpp"
#include "isac/music.hpp"
#include "isac/parallel.hpp"
#include "isac/random.hpp"
#include "isac/signal.hpp"

namespace {

struct Fixture {
  isac::Scenario scenario;
  isac::CoverageGrid grid = isac::coverage_grid(scenario);
  isac::Deployment deployment = isac::midpoint_baseline(scenario);
  isac::GridCodebook codebook = isac::build_codebook(deployment, scenario);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_PairScanSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(isac::serial::max_weighted_correlation(f.codebook));
}

void BM_PairScanParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(isac::max_weighted_correlation(f.codebook));
}

void BM_SteeringMatrixSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(isac::serial::steering_matrix(f.deployment, f.scenario, f.grid));
}

void BM_SteeringMatrixParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(isac::steering_matrix(f.deployment, f.scenario, f.grid));
}

void BM_RmseMapSerial(benchmark::State& state) {
  const auto& f = fixture();
  const auto powers = isac::snr_to_powers(f.scenario.snr_db);
  const int trials = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(isac::serial::rmse_map(f.codebook, powers, f.scenario.snapshot_count, trials, 7));
  }
}

void BM_RmseMapParallel(benchmark::State& state) {
  const auto& f = fixture();
  const auto powers = isac::snr_to_powers(f.scenario.snr_db);
  const int trials = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(isac::rmse_map(f.codebook, powers, f.scenario.snapshot_count, trials, 7));
  }
}

}  // namespace

BENCHMARK(BM_PairScanSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairScanParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SteeringMatrixSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SteeringMatrixParallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RmseMapSerial)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RmseMapParallel)->Arg(2)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  if (auto env = isac::threads_from_env()) isac::set_threads(*env);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
