#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "tensilex/baseline.hpp"

namespace {

void BM_ExtractFeatures(benchmark::State& state) {
  const auto texts = bench::make_texts(1000, 8);
  for (auto _ : state) {
    for (const auto& t : texts) benchmark::DoNotOptimize(tensilex::extract_features(t));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(texts.size()));
}
BENCHMARK(BM_ExtractFeatures)->Unit(benchmark::kMillisecond);

void BM_InformationGain(benchmark::State& state) {
  const auto corpus = bench::make_corpus(static_cast<std::size_t>(state.range(0)), 9);
  std::vector<tensilex::FeatureVector> docs;
  for (const auto& ex : corpus) docs.push_back(tensilex::extract_features(ex.text));
  const auto labels = tensilex::labels_for(corpus, tensilex::Scale::Stress);
  for (auto _ : state) {
    const auto table = tensilex::information_gain(docs, labels);
    benchmark::DoNotOptimize(tensilex::select_top(table, 1000));
  }
}
BENCHMARK(BM_InformationGain)->Arg(500)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_TrainLogistic(benchmark::State& state) {
  const auto corpus = bench::make_corpus(1000, 10);
  std::vector<tensilex::FeatureVector> docs;
  for (const auto& ex : corpus) docs.push_back(tensilex::extract_features(ex.text));
  const auto labels = tensilex::labels_for(corpus, tensilex::Scale::Relaxation);
  const auto subset = tensilex::select_top(tensilex::information_gain(docs, labels), 300);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tensilex::train(tensilex::ClassifierKind::Logistic, docs, labels, subset));
  }
}
BENCHMARK(BM_TrainLogistic)->Unit(benchmark::kMillisecond);

}  // namespace
