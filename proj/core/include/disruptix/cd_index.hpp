#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disruptix/graph.hpp"

namespace disruptix {

// Forward citation window: a fixed number of years after the focal
// publication, or everything published later.
struct CdWindow {
  bool is_max = false;
  std::int32_t years = 5;

  static CdWindow fixed(std::int32_t t) { return {false, t}; }
  static CdWindow max() { return {true, 0}; }
};

// N_R adjustment variants. Entity subtracts the focal's own reference
// count; FieldYear subtracts the mean reference count of the focal's
// (field, publication year) cell, both floored at zero.
enum class Normalization { Raw, Entity, FieldYear };

struct CdConfig {
  CdWindow window = CdWindow::fixed(5);
  DateKind resolution = DateKind::YearOnly;
  Normalization normalization = Normalization::Raw;
};

// Window node pools, sorted by id, focal excluded. fb_pool holds nodes
// eligible for the F and B sets; r_pool those eligible for R. At full-date
// resolution both pools are the interval (d_i, d_i + t]; at year
// resolution fb_pool spans years [y_i, y_i+t] while r_pool starts at
// y_i+1, so same-year citers count toward F/B but never R.
struct ForwardWindow {
  std::vector<NodeId> fb_pool;
  std::vector<NodeId> r_pool;
};

// Disjoint citer counts: n_f cite the focal only, n_b cite the focal and
// at least one of its references, n_r cite a reference but not the focal.
// Set semantics: a citer touching several references counts once.
struct CiterPartition {
  std::int32_t n_f = 0;
  std::int32_t n_b = 0;
  std::int32_t n_r = 0;
};

struct CdValue {
  bool defined = false;
  double value = 0.0;  // in [-1, 1] when defined

  static CdValue undefined() { return {false, 0.0}; }
  static CdValue of(double v) { return {true, v}; }
};

// Batch row: raw partition plus the (possibly normalized) index value.
struct NodeCd {
  CiterPartition partition;
  CdValue cd;
};

struct YearRow {
  std::int32_t year = 0;
  double mean = 0.0;
  std::int64_t count = 0;
  bool has_stderr = false;  // requires count >= 2
  double stderr_ = 0.0;
  double ci_low = 0.0;   // mean - 1.96 * stderr
  double ci_high = 0.0;  // mean + 1.96 * stderr
};

struct YearSeries {
  std::string group;  // "all" when ungrouped, else the field label
  std::vector<YearRow> rows;  // ascending year; years without defined values omitted
};

ForwardWindow forward_window(const CitationGraph& graph, NodeId focal, const CdConfig& config);

CiterPartition classify_citers(const CitationGraph& graph, NodeId focal,
                               const ForwardWindow& window);

// (n_f - n_b) / (n_f + n_b + n_r') with n_r' per the normalization mode;
// undefined when the denominator is not positive. A node with zero
// references is therefore either exactly 1.0 (some window citer exists)
// or undefined, in every mode.
CdValue cd(const CitationGraph& graph, NodeId focal, const CdConfig& config);

// All nodes, deterministic for any worker count. Throws SchemaError for
// FieldYear normalization when some node lacks a field label.
std::vector<NodeCd> cd_all(const CitationGraph& graph, const CdConfig& config);

// Mean of defined values per publication year with normal-approximation
// 95% bands (stderr = sample sd / sqrt(count); unavailable below 2
// observations). group_by_field yields one series per field label and
// skips unlabeled nodes; otherwise a single "all" series.
std::vector<YearSeries> yearly_mean(const std::vector<NodeCd>& values, const CitationGraph& graph,
                                    bool group_by_field = false);

// Per-node CSV: id,year,n_refs,n_cites_window,n_f,n_b,n_r,cd,defined
// (cd empty when undefined).
void write_per_node_csv(const CitationGraph& graph, const std::vector<NodeCd>& values,
                        const std::string& path);

// Series CSV: group,year,mean,count,stderr,ci_low,ci_high (stderr and CI
// cells empty when unavailable).
void write_year_series_csv(const std::vector<YearSeries>& series, const std::string& path);

}  // namespace disruptix
