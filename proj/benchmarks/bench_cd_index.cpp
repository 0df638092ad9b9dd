#include <benchmark/benchmark.h>

#include "disruptix/cd_index.hpp"
#include "disruptix/synthgen.hpp"

using namespace disruptix;

namespace {

SynthResult corpus_with(std::int32_t nodes_per_year) {
  SynthConfig config;
  config.seed = 3;
  config.year_start = 2000;
  config.year_end = 2019;
  config.nodes_per_year = nodes_per_year;
  config.ref_count_weights = SynthConfig::uniform_ref_weights(10, 20);
  return generate(config);
}

}  // namespace

static void BM_CdAll(benchmark::State& state) {
  SynthResult corpus = corpus_with(static_cast<std::int32_t>(state.range(0)));
  CdConfig config{CdWindow::fixed(5), DateKind::YearOnly};
  for (auto _ : state) {
    auto values = cd_all(corpus.graph, config);
    benchmark::DoNotOptimize(values);
  }
  state.SetItemsProcessed(state.iterations() * corpus.graph.n());
}
BENCHMARK(BM_CdAll)->Arg(100)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_CdAllMaxWindow(benchmark::State& state) {
  SynthResult corpus = corpus_with(static_cast<std::int32_t>(state.range(0)));
  CdConfig config{CdWindow::max(), DateKind::YearOnly};
  for (auto _ : state) {
    auto values = cd_all(corpus.graph, config);
    benchmark::DoNotOptimize(values);
  }
  state.SetItemsProcessed(state.iterations() * corpus.graph.n());
}
BENCHMARK(BM_CdAllMaxWindow)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

static void BM_YearlyMean(benchmark::State& state) {
  SynthResult corpus = corpus_with(500);
  CdConfig config{CdWindow::fixed(5), DateKind::YearOnly};
  auto values = cd_all(corpus.graph, config);
  for (auto _ : state) {
    auto series = yearly_mean(values, corpus.graph);
    benchmark::DoNotOptimize(series);
  }
}
BENCHMARK(BM_YearlyMean)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
