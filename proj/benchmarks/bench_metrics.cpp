#include <benchmark/benchmark.h>

#include <random>

#include "tensilex/metrics.hpp"

namespace {

tensilex::CodingMatrix random_matrix(std::size_t items, std::size_t coders, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  tensilex::CodingMatrix m;
  m.cells.assign(items, std::vector<std::optional<int>>(coders));
  for (auto& row : m.cells) {
    for (auto& cell : row) {
      if (rng() % 10 != 0) cell = 1 + static_cast<int>(rng() % 5);
    }
  }
  return m;
}

void BM_KrippendorffAlpha(benchmark::State& state) {
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 3, 6);
  for (auto _ : state) benchmark::DoNotOptimize(tensilex::krippendorff_alpha(m));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KrippendorffAlpha)->RangeMultiplier(10)->Range(100, 100000);

void BM_Evaluate(benchmark::State& state) {
  std::mt19937_64 rng(7);
  tensilex::PairedSeries s;
  for (int i = 0; i < state.range(0); ++i) {
    s.predictions.push_back(static_cast<double>(1 + rng() % 5));
    s.golds.push_back(static_cast<double>(1 + rng() % 5));
  }
  for (auto _ : state) benchmark::DoNotOptimize(tensilex::evaluate(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evaluate)->Arg(1000)->Arg(100000);

}  // namespace
