#include "disruptix/rewiring.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "disruptix/csv.hpp"
#include "disruptix/errors.hpp"
#include "disruptix/parallel.hpp"
#include "disruptix/rng.hpp"

namespace disruptix {

namespace {

// Current out-targets of one node, kept sorted in a fixed-size span
// (swaps never change a node's out-degree).
class SortedTargets {
 public:
  SortedTargets(const CitationGraph& graph) : off_(static_cast<std::size_t>(graph.n()) + 1, 0) {
    flat_.reserve(static_cast<std::size_t>(graph.m()));
    for (NodeId u = 0; u < graph.n(); ++u) {
      auto nbrs = graph.out_neighbors(u);  // already sorted
      flat_.insert(flat_.end(), nbrs.begin(), nbrs.end());
      off_[static_cast<std::size_t>(u) + 1] =
          off_[static_cast<std::size_t>(u)] + static_cast<std::int64_t>(nbrs.size());
    }
  }

  bool contains(NodeId u, NodeId v) const {
    auto begin = flat_.begin() + off_[static_cast<std::size_t>(u)];
    auto end = flat_.begin() + off_[static_cast<std::size_t>(u) + 1];
    return std::binary_search(begin, end, v);
  }

  void replace(NodeId u, NodeId old_target, NodeId new_target) {
    auto begin = flat_.begin() + off_[static_cast<std::size_t>(u)];
    auto end = flat_.begin() + off_[static_cast<std::size_t>(u) + 1];
    auto it = std::lower_bound(begin, end, old_target);
    *it = new_target;
    // Bubble to restore order; spans are tiny so the shifts are cheap.
    while (it + 1 != end && *(it + 1) < *it) {
      std::iter_swap(it, it + 1);
      ++it;
    }
    while (it != begin && *it < *(it - 1)) {
      std::iter_swap(it, it - 1);
      --it;
    }
  }

 private:
  std::vector<std::int64_t> off_;
  std::vector<NodeId> flat_;
};

}  // namespace

RewireResult rewire(const CitationGraph& graph, const RewireConfig& config,
                    std::int32_t run_index) {
  if (graph.m() < 2) throw SchemaError("rewire: need at least two edges");
  if (config.retained_multiplier < 1) throw SchemaError("rewire: retained_multiplier must be >= 1");

  const std::int64_t m = graph.m();
  std::vector<NodeId> head(static_cast<std::size_t>(m));  // invariant under swaps
  std::vector<NodeId> tail(static_cast<std::size_t>(m));
  {
    std::int64_t e = 0;
    for (NodeId u = 0; u < graph.n(); ++u)
      for (NodeId v : graph.out_neighbors(u)) {
        head[static_cast<std::size_t>(e)] = u;
        tail[static_cast<std::size_t>(e)] = v;
        ++e;
      }
  }

  // Edges are grouped by (citer year, cited year). A swap keeps both of
  // its edges inside their stratum, so membership and positions are fixed
  // for the whole run.
  std::map<std::pair<std::int32_t, std::int32_t>, std::vector<std::int64_t>> strata_map;
  for (std::int64_t e = 0; e < m; ++e)
    strata_map[{graph.year(head[static_cast<std::size_t>(e)]),
                graph.year(tail[static_cast<std::size_t>(e)])}]
        .push_back(e);
  std::vector<std::vector<std::int64_t>> strata;
  strata.reserve(strata_map.size());
  std::vector<std::int32_t> stratum_of(static_cast<std::size_t>(m));
  std::vector<std::int64_t> pos_in_stratum(static_cast<std::size_t>(m));
  for (auto& [key, members] : strata_map) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      stratum_of[static_cast<std::size_t>(members[i])] = static_cast<std::int32_t>(strata.size());
      pos_in_stratum[static_cast<std::size_t>(members[i])] = static_cast<std::int64_t>(i);
    }
    strata.push_back(std::move(members));
  }

  SortedTargets targets(graph);

  RewireResult result;
  result.seed = config.seed + static_cast<std::uint64_t>(run_index);
  Rng rng(result.seed);

  const std::int64_t target = config.retained_multiplier * m;
  const std::int64_t cap = config.max_attempts_multiplier * m;
  while (result.retained < target && result.attempts < cap) {
    ++result.attempts;
    std::int64_t e1 = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(m)));
    const auto& members = strata[static_cast<std::size_t>(stratum_of[static_cast<std::size_t>(e1)])];
    const std::int64_t s = static_cast<std::int64_t>(members.size());
    if (s < 2) continue;  // no same-year partner exists
    std::int64_t j = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(s - 1)));
    if (j >= pos_in_stratum[static_cast<std::size_t>(e1)]) ++j;
    std::int64_t e2 = members[static_cast<std::size_t>(j)];

    NodeId a = head[static_cast<std::size_t>(e1)], b = tail[static_cast<std::size_t>(e1)];
    NodeId c = head[static_cast<std::size_t>(e2)], d = tail[static_cast<std::size_t>(e2)];
    // Proposed: a->d, c->b. Self-loops and duplicates are rejected; a
    // proposal equal to an existing edge covers the no-op cases a==c and
    // b==d as well.
    if (a == d || c == b) continue;
    if (targets.contains(a, d) || targets.contains(c, b)) continue;

    targets.replace(a, b, d);
    targets.replace(c, d, b);
    tail[static_cast<std::size_t>(e1)] = d;
    tail[static_cast<std::size_t>(e2)] = b;
    ++result.retained;
  }
  result.saturated = result.retained < target;

  std::vector<std::pair<NodeId, NodeId>> edges(static_cast<std::size_t>(m));
  for (std::int64_t e = 0; e < m; ++e)
    edges[static_cast<std::size_t>(e)] = {head[static_cast<std::size_t>(e)],
                                          tail[static_cast<std::size_t>(e)]};
  result.graph = CitationGraph::with_edges(graph, std::move(edges));
  // The swap construction preserves degrees; verify rather than trust it.
  for (NodeId v = 0; v < graph.n(); ++v) {
    if (result.graph.in_degree(v) != graph.in_degree(v) ||
        result.graph.out_degree(v) != graph.out_degree(v))
      throw NumericError("rewire: degree sequence changed for node " + graph.key(v));
  }
  return result;
}

RewiredSeries rewired_cd_series(const CitationGraph& graph, const RewireConfig& config,
                                const CdConfig& cd_config) {
  if (config.runs < 1) throw SchemaError("rewire: runs must be >= 1");
  RewiredSeries out;
  out.per_run.resize(static_cast<std::size_t>(config.runs));
  out.run_saturated.resize(static_cast<std::size_t>(config.runs));

  std::vector<std::vector<NodeCd>> run_values(static_cast<std::size_t>(config.runs));
  parallel_for(config.runs, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      RewireResult res = rewire(graph, config, static_cast<std::int32_t>(r));
      out.run_saturated[static_cast<std::size_t>(r)] = res.saturated;
      run_values[static_cast<std::size_t>(r)] = cd_all(res.graph, cd_config);
      auto series = yearly_mean(run_values[static_cast<std::size_t>(r)], res.graph);
      out.per_run[static_cast<std::size_t>(r)] =
          series.empty() ? YearSeries{"all", {}} : std::move(series.front());
    }
  });

  out.mean_over_runs = mean_across_series(out.per_run, "rewired_mean");
  return out;
}

YearSeries mean_across_series(const std::vector<YearSeries>& series, std::string group) {
  std::map<std::int32_t, std::vector<double>> by_year;
  for (const auto& s : series)
    for (const auto& row : s.rows) by_year[row.year].push_back(row.mean);
  YearSeries out;
  out.group = std::move(group);
  for (const auto& [year, means] : by_year) {
    YearRow row;
    row.year = year;
    row.count = static_cast<std::int64_t>(means.size());
    double sum = 0.0;
    for (double x : means) sum += x;
    row.mean = sum / static_cast<double>(means.size());
    if (means.size() >= 2) {
      double ss = 0.0;
      for (double x : means) ss += (x - row.mean) * (x - row.mean);
      double sd = std::sqrt(ss / static_cast<double>(means.size() - 1));
      row.has_stderr = true;
      row.stderr_ = sd / std::sqrt(static_cast<double>(means.size()));
      row.ci_low = row.mean - 1.96 * row.stderr_;
      row.ci_high = row.mean + 1.96 * row.stderr_;
    }
    out.rows.push_back(row);
  }
  return out;
}

ZScoreTable z_scores(const CitationGraph& graph, const RewireConfig& config,
                     const CdConfig& cd_config) {
  if (config.runs < 2) throw SchemaError("z-scores need at least two rewired runs");

  std::vector<NodeCd> observed = cd_all(graph, cd_config);
  std::vector<std::vector<NodeCd>> rewired(static_cast<std::size_t>(config.runs));
  parallel_for(config.runs, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      RewireResult res = rewire(graph, config, static_cast<std::int32_t>(r));
      rewired[static_cast<std::size_t>(r)] = cd_all(res.graph, cd_config);
    }
  });

  ZScoreTable table;
  table.rows.resize(static_cast<std::size_t>(graph.n()));
  std::map<std::int32_t, std::vector<std::size_t>> year_nodes;
  for (NodeId v = 0; v < graph.n(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    ZScoreRow& row = table.rows[i];
    row.node = v;
    row.observed = observed[i].cd;
    double sum = 0.0;
    for (const auto& run : rewired) {
      if (run[i].cd.defined) {
        ++row.n_rewired_defined;
        sum += run[i].cd.value;
      }
    }
    if (row.n_rewired_defined >= 1) {
      row.has_mu = true;
      row.mu = sum / static_cast<double>(row.n_rewired_defined);
    }
    if (row.n_rewired_defined >= 2) {
      double ss = 0.0;
      for (const auto& run : rewired)
        if (run[i].cd.defined) ss += (run[i].cd.value - row.mu) * (run[i].cd.value - row.mu);
      row.has_sigma = true;
      row.sigma = std::sqrt(ss / static_cast<double>(row.n_rewired_defined - 1));
    }
    if (row.observed.defined && row.has_sigma && row.sigma > 0.0) {
      row.has_z = true;
      row.z = (row.observed.value - row.mu) / row.sigma;
      year_nodes[graph.year(v)].push_back(i);
    }
  }

  for (const auto& [year, ids] : year_nodes) {
    ZScoreYearRow yr;
    yr.year = year;
    yr.n = static_cast<std::int64_t>(ids.size());
    double z_sum = 0.0, obs_sum = 0.0, mu_sum = 0.0, sigma_sum = 0.0;
    for (std::size_t i : ids) {
      const ZScoreRow& row = table.rows[i];
      z_sum += row.z;
      obs_sum += row.observed.value;
      mu_sum += row.mu;
      sigma_sum += row.sigma;
    }
    double count = static_cast<double>(ids.size());
    yr.mean_z = z_sum / count;
    yr.agg_z = (obs_sum / count - mu_sum / count) / (sigma_sum / count);
    table.years.push_back(yr);
  }
  return table;
}

GapSeries gap_series(const YearSeries& observed, const YearSeries& rewired_mean) {
  GapSeries out;
  std::map<std::int32_t, double> obs, rew;
  for (const auto& row : observed.rows) obs[row.year] = row.mean;
  for (const auto& row : rewired_mean.rows) rew[row.year] = row.mean;
  for (const auto& [year, mean] : obs) {
    auto it = rew.find(year);
    if (it == rew.end()) {
      out.dropped_years.push_back(year);
      continue;
    }
    out.rows.push_back({year, it->second - mean});
  }
  for (const auto& [year, mean] : rew)
    if (!obs.count(year)) out.dropped_years.push_back(year);
  std::sort(out.dropped_years.begin(), out.dropped_years.end());
  return out;
}

void write_zscore_csv(const CitationGraph& graph, const ZScoreTable& table,
                      const std::string& path) {
  CsvWriter out(path);
  out.row({"id", "observed", "mu", "sigma", "z"});
  for (const auto& row : table.rows) {
    out.row({graph.key(row.node),
             row.observed.defined ? format_double(row.observed.value) : "",
             row.has_mu ? format_double(row.mu) : "", row.has_sigma ? format_double(row.sigma) : "",
             row.has_z ? format_double(row.z) : ""});
  }
  out.close();
}

void write_zscore_year_csv(const ZScoreTable& table, const std::string& path) {
  CsvWriter out(path);
  out.row({"year", "n", "mean_z", "agg_z"});
  for (const auto& row : table.years)
    out.row({std::to_string(row.year), std::to_string(row.n), format_double(row.mean_z),
             format_double(row.agg_z)});
  out.close();
}

void write_gap_csv(const GapSeries& gaps, const std::string& path) {
  CsvWriter out(path);
  out.row({"year", "gap"});
  for (const auto& row : gaps.rows)
    out.row({std::to_string(row.year), format_double(row.gap)});
  out.close();
}

}  // namespace disruptix
