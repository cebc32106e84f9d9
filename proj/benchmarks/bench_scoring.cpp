#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "tensilex/scorer.hpp"
#include "tensilex/textproc.hpp"

namespace {

void BM_ScoreText(benchmark::State& state) {
  const tensilex::Scorer scorer(bench::shipped_lexicon());
  const auto texts = bench::make_texts(static_cast<std::size_t>(state.range(0)), 1);
  std::size_t bytes = 0;
  for (const auto& t : texts) bytes += t.size();
  for (auto _ : state) {
    for (const auto& t : texts) benchmark::DoNotOptimize(scorer.score_text(t).score);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
// Per-text cost should stay flat as the batch grows.
BENCHMARK(BM_ScoreText)->RangeMultiplier(10)->Range(10, 10000)->Unit(benchmark::kMicrosecond);

void BM_EvaluatePlan(benchmark::State& state) {
  const auto& lex = bench::shipped_lexicon();
  const tensilex::Scorer scorer(lex);
  std::vector<tensilex::TextPlan> plans;
  for (const auto& t : bench::make_texts(1000, 2)) plans.push_back(scorer.plan_text(t));
  for (auto _ : state) {
    for (const auto& p : plans) benchmark::DoNotOptimize(tensilex::Scorer::evaluate(p, lex));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(plans.size()));
}
BENCHMARK(BM_EvaluatePlan)->Unit(benchmark::kMicrosecond);

void BM_Process(benchmark::State& state) {
  const tensilex::Scorer scorer(bench::shipped_lexicon());
  const auto texts = bench::make_texts(1000, 3);
  for (auto _ : state) {
    for (const auto& t : texts) benchmark::DoNotOptimize(tensilex::process(t, scorer.recognised()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(texts.size()));
}
BENCHMARK(BM_Process)->Unit(benchmark::kMicrosecond);

}  // namespace
