#include <benchmark/benchmark.h>

#include "disruptix/rewiring.hpp"
#include "disruptix/synthgen.hpp"

using namespace disruptix;

namespace {

SynthResult corpus_with(std::int32_t nodes_per_year, std::int32_t ref_max) {
  SynthConfig config;
  config.seed = 3;
  config.year_start = 2000;
  config.year_end = 2019;
  config.nodes_per_year = nodes_per_year;
  config.ref_count_weights = SynthConfig::uniform_ref_weights(ref_max / 2, ref_max);
  return generate(config);
}

}  // namespace

// Throughput of retained swaps, reported as items/s.
static void BM_Rewire(benchmark::State& state) {
  SynthResult corpus = corpus_with(static_cast<std::int32_t>(state.range(0)),
                                   static_cast<std::int32_t>(state.range(1)));
  RewireConfig config;
  config.seed = 11;
  config.retained_multiplier = 10;
  std::int64_t retained = 0;
  std::int32_t run_index = 0;
  for (auto _ : state) {
    RewireResult result = rewire(corpus.graph, config, run_index++);
    retained += result.retained;
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(retained);
}
BENCHMARK(BM_Rewire)->Args({100, 10})->Args({250, 20})->Args({500, 30})
    ->Unit(benchmark::kMillisecond);

static void BM_ZScores(benchmark::State& state) {
  SynthResult corpus = corpus_with(100, 10);
  RewireConfig config;
  config.seed = 11;
  config.retained_multiplier = 5;
  config.runs = 3;
  CdConfig cd_config{CdWindow::fixed(5), DateKind::YearOnly};
  for (auto _ : state) {
    ZScoreTable table = z_scores(corpus.graph, config, cd_config);
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(BM_ZScores)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
