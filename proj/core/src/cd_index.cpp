#include "disruptix/cd_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "disruptix/csv.hpp"
#include "disruptix/errors.hpp"
#include "disruptix/parallel.hpp"

namespace disruptix {

namespace {

void check_resolution(const CitationGraph& graph, const CdConfig& config) {
  if (config.resolution != graph.kind())
    throw SchemaError("cd config resolution does not match the graph's date kind");
  if (!config.window.is_max && config.window.years < 1)
    throw SchemaError("cd window must be at least one year");
}

// Window membership predicates for one focal node.
struct WindowPred {
  const CitationGraph& graph;
  NodeId focal;
  CdWindow window;
  Date lo_date, hi_date;      // FullDate bounds: lo < d <= hi
  std::int32_t lo_year = 0;   // YearOnly F/B pool start (focal year)
  std::int32_t hi_year = 0;

  WindowPred(const CitationGraph& g, NodeId f, const CdConfig& cfg)
      : graph(g), focal(f), window(cfg.window) {
    if (g.kind() == DateKind::FullDate) {
      lo_date = g.date(f);
      if (!window.is_max) hi_date = lo_date.plus_years(window.years);
    } else {
      lo_year = g.year(f);
      if (!window.is_max) hi_year = lo_year + window.years;
    }
  }

  bool in_fb_pool(NodeId j) const {
    if (j == focal) return false;
    if (graph.kind() == DateKind::FullDate) {
      const Date& d = graph.date(j);
      return d > lo_date && (window.is_max || !(d > hi_date));
    }
    std::int32_t y = graph.year(j);
    return y >= lo_year && (window.is_max || y <= hi_year);
  }

  bool in_r_pool(NodeId j) const {
    if (graph.kind() == DateKind::FullDate) return in_fb_pool(j);
    if (j == focal) return false;
    std::int32_t y = graph.year(j);
    return y >= lo_year + 1 && (window.is_max || y <= hi_year);
  }
};

// Sorted-range intersection test (both spans ascending).
bool intersects(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j]) ++i;
    else ++j;
  }
  return false;
}

double adjusted_n_r(const CitationGraph& graph, NodeId focal, const CdConfig& config,
                    std::int32_t n_r, double cell_mean_refs) {
  switch (config.normalization) {
    case Normalization::Raw:
      return static_cast<double>(n_r);
    case Normalization::Entity:
      return static_cast<double>(std::max<std::int32_t>(n_r - graph.out_degree(focal), 0));
    case Normalization::FieldYear:
      return std::max(static_cast<double>(n_r) - cell_mean_refs, 0.0);
  }
  return static_cast<double>(n_r);
}

CdValue value_from_partition(const CiterPartition& p, double n_r_adj) {
  double denom = static_cast<double>(p.n_f) + static_cast<double>(p.n_b) + n_r_adj;
  if (!(denom > 0.0)) return CdValue::undefined();
  return CdValue::of((static_cast<double>(p.n_f) - static_cast<double>(p.n_b)) / denom);
}

// Mean out-degree over every node of the focal's (field, year) cell,
// zero-reference nodes included.
double cell_mean_refs_scan(const CitationGraph& graph, NodeId focal) {
  const std::string& field = graph.field(focal);
  std::int32_t year = graph.year(focal);
  std::int64_t sum = 0, count = 0;
  for (NodeId v = 0; v < graph.n(); ++v) {
    if (graph.year(v) == year && graph.field(v) == field) {
      sum += graph.out_degree(v);
      ++count;
    }
  }
  return static_cast<double>(sum) / static_cast<double>(count);
}

void require_field(const CitationGraph& graph, NodeId focal) {
  if (!graph.has_field(focal))
    throw SchemaError("field-year normalization: node '" + graph.key(focal) +
                      "' has no field label");
}

}  // namespace

ForwardWindow forward_window(const CitationGraph& graph, NodeId focal, const CdConfig& config) {
  check_resolution(graph, config);
  WindowPred pred(graph, focal, config);
  ForwardWindow window;
  for (NodeId v = 0; v < graph.n(); ++v) {
    if (pred.in_fb_pool(v)) window.fb_pool.push_back(v);
    if (pred.in_r_pool(v)) window.r_pool.push_back(v);
  }
  return window;
}

CiterPartition classify_citers(const CitationGraph& graph, NodeId focal,
                               const ForwardWindow& window) {
  auto refs = graph.out_neighbors(focal);
  CiterPartition part;

  // Citers of the focal inside the F/B pool.
  for (NodeId j : graph.in_neighbors(focal)) {
    if (!std::binary_search(window.fb_pool.begin(), window.fb_pool.end(), j)) continue;
    if (intersects(graph.out_neighbors(j), refs)) ++part.n_b;
    else ++part.n_f;
  }

  // Citers of references that do not cite the focal, deduplicated.
  std::vector<NodeId> candidates;
  for (NodeId r : refs)
    for (NodeId j : graph.in_neighbors(r)) candidates.push_back(j);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (NodeId j : candidates) {
    if (graph.has_edge(j, focal)) continue;
    if (std::binary_search(window.r_pool.begin(), window.r_pool.end(), j)) ++part.n_r;
  }
  return part;
}

CdValue cd(const CitationGraph& graph, NodeId focal, const CdConfig& config) {
  check_resolution(graph, config);
  double cell_mean = 0.0;
  if (config.normalization == Normalization::FieldYear) {
    require_field(graph, focal);
    cell_mean = cell_mean_refs_scan(graph, focal);
  }
  CiterPartition part = classify_citers(graph, focal, forward_window(graph, focal, config));
  return value_from_partition(part, adjusted_n_r(graph, focal, config, part.n_r, cell_mean));
}

std::vector<NodeCd> cd_all(const CitationGraph& graph, const CdConfig& config) {
  check_resolution(graph, config);
  const NodeId n = graph.n();

  // Field-year cell means precomputed once; exact integer sums keep the
  // scan path and this batch path bitwise identical.
  std::vector<double> cell_mean(config.normalization == Normalization::FieldYear
                                    ? static_cast<std::size_t>(n)
                                    : 0);
  if (config.normalization == Normalization::FieldYear) {
    for (NodeId v = 0; v < n; ++v) require_field(graph, v);
    std::map<std::pair<std::string, std::int32_t>, std::pair<std::int64_t, std::int64_t>> cells;
    for (NodeId v = 0; v < n; ++v) {
      auto& cell = cells[{graph.field(v), graph.year(v)}];
      cell.first += graph.out_degree(v);
      cell.second += 1;
    }
    for (NodeId v = 0; v < n; ++v) {
      const auto& cell = cells[{graph.field(v), graph.year(v)}];
      cell_mean[static_cast<std::size_t>(v)] =
          static_cast<double>(cell.first) / static_cast<double>(cell.second);
    }
  }

  std::vector<NodeCd> out(static_cast<std::size_t>(n));
  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    // Epoch-stamped scratch avoids clearing per focal.
    std::vector<std::int64_t> is_ref(static_cast<std::size_t>(n), -1);
    std::vector<std::int64_t> seen(static_cast<std::size_t>(n), -1);
    std::int64_t epoch = 0;

    for (std::int64_t idx = begin; idx < end; ++idx) {
      NodeId focal = static_cast<NodeId>(idx);
      WindowPred pred(graph, focal, config);
      ++epoch;
      auto refs = graph.out_neighbors(focal);
      for (NodeId r : refs) is_ref[static_cast<std::size_t>(r)] = epoch;

      CiterPartition part;
      for (NodeId j : graph.in_neighbors(focal)) {
        if (!pred.in_fb_pool(j)) continue;
        bool cites_ref = false;
        for (NodeId t : graph.out_neighbors(j)) {
          if (is_ref[static_cast<std::size_t>(t)] == epoch) {
            cites_ref = true;
            break;
          }
        }
        cites_ref ? ++part.n_b : ++part.n_f;
      }
      // Every focal citer is stamped, in or out of the pool: the R pool
      // is a subset of the F/B pool, so none of them can belong to R.
      for (NodeId j : graph.in_neighbors(focal)) seen[static_cast<std::size_t>(j)] = epoch;
      for (NodeId r : refs) {
        for (NodeId j : graph.in_neighbors(r)) {
          if (seen[static_cast<std::size_t>(j)] == epoch) continue;
          seen[static_cast<std::size_t>(j)] = epoch;
          if (pred.in_r_pool(j)) ++part.n_r;
        }
      }

      double mean = cell_mean.empty() ? 0.0 : cell_mean[static_cast<std::size_t>(idx)];
      out[static_cast<std::size_t>(idx)] = {
          part, value_from_partition(part, adjusted_n_r(graph, focal, config, part.n_r, mean))};
    }
  });
  return out;
}

std::vector<YearSeries> yearly_mean(const std::vector<NodeCd>& values, const CitationGraph& graph,
                                    bool group_by_field) {
  std::map<std::string, std::map<std::int32_t, std::vector<double>>> buckets;
  for (NodeId v = 0; v < graph.n(); ++v) {
    const CdValue& cd = values[static_cast<std::size_t>(v)].cd;
    if (!cd.defined) continue;
    if (group_by_field && !graph.has_field(v)) continue;
    std::string group = group_by_field ? graph.field(v) : "all";
    buckets[std::move(group)][graph.year(v)].push_back(cd.value);
  }

  std::vector<YearSeries> series;
  for (auto& [group, years] : buckets) {
    YearSeries s;
    s.group = group;
    for (auto& [year, vals] : years) {
      YearRow row;
      row.year = year;
      row.count = static_cast<std::int64_t>(vals.size());
      double sum = 0.0;
      for (double x : vals) sum += x;
      row.mean = sum / static_cast<double>(vals.size());
      if (vals.size() >= 2) {
        double ss = 0.0;
        for (double x : vals) ss += (x - row.mean) * (x - row.mean);
        double sd = std::sqrt(ss / static_cast<double>(vals.size() - 1));
        row.has_stderr = true;
        row.stderr_ = sd / std::sqrt(static_cast<double>(vals.size()));
        row.ci_low = row.mean - 1.96 * row.stderr_;
        row.ci_high = row.mean + 1.96 * row.stderr_;
      }
      s.rows.push_back(row);
    }
    series.push_back(std::move(s));
  }
  return series;
}

void write_per_node_csv(const CitationGraph& graph, const std::vector<NodeCd>& values,
                        const std::string& path) {
  CsvWriter out(path);
  out.row({"id", "year", "n_refs", "n_cites_window", "n_f", "n_b", "n_r", "cd", "defined"});
  for (NodeId v = 0; v < graph.n(); ++v) {
    const NodeCd& row = values[static_cast<std::size_t>(v)];
    out.row({graph.key(v), std::to_string(graph.year(v)), std::to_string(graph.out_degree(v)),
             std::to_string(row.partition.n_f + row.partition.n_b),
             std::to_string(row.partition.n_f), std::to_string(row.partition.n_b),
             std::to_string(row.partition.n_r),
             row.cd.defined ? format_double(row.cd.value) : std::string{},
             row.cd.defined ? "1" : "0"});
  }
  out.close();
}

void write_year_series_csv(const std::vector<YearSeries>& series, const std::string& path) {
  CsvWriter out(path);
  out.row({"group", "year", "mean", "count", "stderr", "ci_low", "ci_high"});
  for (const auto& s : series) {
    for (const auto& row : s.rows) {
      out.row({s.group, std::to_string(row.year), format_double(row.mean),
               std::to_string(row.count), row.has_stderr ? format_double(row.stderr_) : "",
               row.has_stderr ? format_double(row.ci_low) : "",
               row.has_stderr ? format_double(row.ci_high) : ""});
    }
  }
  out.close();
}

}  // namespace disruptix
