// Serial vs OpenMP policy-sweep and counterfactual kernels on one desk-scale workload.

#include <benchmark/benchmark.h>

#include "spotdag/harness/experiment.hpp"
#include "spotdag/harness/kernels.hpp"

namespace {

using namespace spotdag::harness;

const Workload& workload() {
  static const Workload w = [] {
    GeneratorConfig cfg;
    cfg.job_count = 200;
    return make_workload(cfg, 1);
  }();
  return w;
}

const std::vector<PolicySpec>& policies() {
  static const auto p = proposed_policies(PolicySets{}, true);
  return p;
}

void BM_SweepSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(workload(), policies(), static_cast<int>(state.range(0))));
}

void BM_SweepParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sweep_parallel(workload(), policies(), static_cast<int>(state.range(0))));
}

void BM_CounterfactualSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(counterfactual_matrix_serial(workload(), policies(), 300));
}

void BM_CounterfactualParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(counterfactual_matrix_parallel(workload(), policies(), 300));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(0)->Arg(600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(0)->Arg(600)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CounterfactualSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CounterfactualParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
