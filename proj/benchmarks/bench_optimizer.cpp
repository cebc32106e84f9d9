#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "tensilex/optimizer.hpp"

namespace {

void BM_HillClimb(benchmark::State& state) {
  const auto corpus = bench::make_corpus(static_cast<std::size_t>(state.range(0)), 4);
  const auto start = bench::perturbed_lexicon(8, 4);
  tensilex::OptimizerConfig cfg;
  cfg.seed = 2024;
  int passes = 0;
  for (auto _ : state) {
    const auto result = tensilex::hill_climb(start, corpus, cfg);
    passes = result.report.passes_run;
    benchmark::DoNotOptimize(result.report.final_error);
  }
  state.counters["passes"] = passes;
}
BENCHMARK(BM_HillClimb)->Arg(200)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_TotalAbsoluteError(benchmark::State& state) {
  const auto corpus = bench::make_corpus(1000, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tensilex::total_absolute_error(bench::shipped_lexicon(), corpus));
  }
}
BENCHMARK(BM_TotalAbsoluteError)->Unit(benchmark::kMillisecond);

}  // namespace
