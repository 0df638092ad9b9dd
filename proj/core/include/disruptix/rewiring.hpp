#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disruptix/cd_index.hpp"
#include "disruptix/graph.hpp"

namespace disruptix {

struct RewireConfig {
  std::uint64_t seed = 1;
  // Swaps retained before a run stops: retained_multiplier * |E|.
  std::int64_t retained_multiplier = 100;
  // Proposal budget: max_attempts_multiplier * |E|; hitting it sets the
  // saturation flag instead of failing.
  std::int64_t max_attempts_multiplier = 10000;
  std::int32_t runs = 10;  // >= 2 for z-scores
};

struct RewireResult {
  CitationGraph graph;
  std::int64_t retained = 0;
  std::int64_t attempts = 0;
  std::uint64_t seed = 0;  // the per-run seed actually used
  bool saturated = false;  // attempt budget exhausted before the target
};

// One degree- and year-preserving rewiring run. Candidate swaps exchange
// the cited endpoints of two edges whose citer years match and whose
// cited years match, and are retained only when they create no self-loop
// and no duplicate edge. Since any such exchange keeps every node's in-
// and out-degree, the year condition is what the sampler enforces; the
// second edge is drawn from the first edge's (citer year, cited year)
// stratum, which proposes exactly the swaps that can satisfy it.
// Deterministic: per-run seed = config.seed + run_index.
RewireResult rewire(const CitationGraph& graph, const RewireConfig& config,
                    std::int32_t run_index);

struct RewiredSeries {
  std::vector<YearSeries> per_run;   // "all" series of each run, run order
  YearSeries mean_over_runs;         // per-year mean of run means
  std::vector<bool> run_saturated;
};

// Rewire `runs` times, compute each run's yearly mean CD, and average the
// per-year means across runs (count = contributing runs; bands over the
// run means).
RewiredSeries rewired_cd_series(const CitationGraph& graph, const RewireConfig& config,
                                const CdConfig& cd_config);

// Per-year mean of the input series' means; count = contributing series,
// bands describe their spread.
YearSeries mean_across_series(const std::vector<YearSeries>& series, std::string group);

struct ZScoreRow {
  NodeId node = -1;
  CdValue observed;
  std::int32_t n_rewired_defined = 0;
  bool has_mu = false;
  double mu = 0.0;
  bool has_sigma = false;
  double sigma = 0.0;     // sample standard deviation (n-1)
  bool has_z = false;     // requires sigma > 0, defined observation, >= 2 values
  double z = 0.0;
};

struct ZScoreYearRow {
  std::int32_t year = 0;
  std::int64_t n = 0;      // nodes with a z-score
  double mean_z = 0.0;     // average of per-node z
  // Same nodes, aggregated first: (mean observed - mean mu) / mean sigma.
  // Emitted alongside mean_z because the two are not interchangeable.
  double agg_z = 0.0;
};

struct ZScoreTable {
  std::vector<ZScoreRow> rows;       // by node id
  std::vector<ZScoreYearRow> years;  // years with at least one z
};

ZScoreTable z_scores(const CitationGraph& graph, const RewireConfig& config,
                     const CdConfig& cd_config);

struct GapRow {
  std::int32_t year = 0;
  double gap = 0.0;  // rewired mean - observed mean
};

struct GapSeries {
  std::vector<GapRow> rows;
  std::vector<std::int32_t> dropped_years;  // present in only one input
};

GapSeries gap_series(const YearSeries& observed, const YearSeries& rewired_mean);

// CSV: id,observed,mu,sigma,z (cells empty when unavailable).
void write_zscore_csv(const CitationGraph& graph, const ZScoreTable& table,
                      const std::string& path);

// CSV: year,n,mean_z,agg_z.
void write_zscore_year_csv(const ZScoreTable& table, const std::string& path);

// CSV: year,gap.
void write_gap_csv(const GapSeries& gaps, const std::string& path);

}  // namespace disruptix
