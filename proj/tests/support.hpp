#pragma once

// Shared test fixtures: small graph builders, randomized corpora, the
// set-materializing CD oracle, and a simple slope test. The oracle works
// from raw (id, date) rows and edge pairs only, independent of the
// adjacency structures the library builds.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "disruptix/cd_index.hpp"
#include "disruptix/graph.hpp"
#include "disruptix/rng.hpp"

namespace testsupport {

using namespace disruptix;

// ---- small graph construction -------------------------------------------

struct NodeSpec {
  std::string key;
  std::string date;  // ISO date or bare year
  std::string field;
  std::int32_t n_authors = -1;
};

inline CitationGraph make_graph(const std::vector<NodeSpec>& nodes,
                                const std::vector<std::pair<std::string, std::string>>& edges,
                                BuildSummary* summary = nullptr) {
  DateKind kind = nodes.empty() || nodes.front().date.find('-') != std::string::npos
                      ? DateKind::FullDate
                      : DateKind::YearOnly;
  std::vector<NodeRecord> recs;
  for (const auto& spec : nodes) {
    NodeRecord rec;
    rec.key = spec.key;
    if (kind == DateKind::FullDate) {
      if (!parse_date(spec.date, rec.date)) throw std::runtime_error("bad date " + spec.date);
    } else {
      rec.year = std::stoi(spec.date);
    }
    rec.field = spec.field;
    rec.n_authors = spec.n_authors;
    recs.push_back(std::move(rec));
  }
  std::vector<std::pair<NodeId, NodeId>> ids;
  auto find = [&](const std::string& key) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].key == key) return static_cast<NodeId>(i);
    throw std::runtime_error("unknown key " + key);
  };
  for (const auto& [u, v] : edges) ids.emplace_back(find(u), find(v));
  return CitationGraph::build(kind, std::move(recs), std::move(ids), summary);
}

// ---- random corpora -------------------------------------------------------

struct RandomGraph {
  CitationGraph graph;
  // Raw rows for the oracle: (year or date) per node, raw edge pairs.
  std::vector<Date> dates;          // FullDate kind
  std::vector<std::int32_t> years;  // YearOnly kind
  DateKind kind = DateKind::YearOnly;
  std::vector<std::pair<NodeId, NodeId>> raw_edges;  // pre-dedup, may repeat
};

// Arbitrary temporal graph: random dates, random edges in any direction
// (self-loops excluded), occasional duplicates to exercise set semantics.
inline RandomGraph random_graph(Rng& rng, NodeId max_nodes, DateKind kind,
                                bool with_fields = false) {
  RandomGraph out;
  out.kind = kind;
  NodeId n = static_cast<NodeId>(2 + uniform_below(rng, static_cast<std::uint64_t>(max_nodes - 1)));
  std::vector<NodeRecord> recs(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) {
    auto& rec = recs[static_cast<std::size_t>(v)];
    rec.key = "n" + std::to_string(v);
    std::int32_t year = 1990 + static_cast<std::int32_t>(uniform_below(rng, 25));
    if (kind == DateKind::FullDate) {
      std::int32_t month = 1 + static_cast<std::int32_t>(uniform_below(rng, 12));
      std::int32_t day = 1 + static_cast<std::int32_t>(
                                 uniform_below(rng, static_cast<std::uint64_t>(
                                                        days_in_month(year, month))));
      rec.date = Date{year, month, day};
      out.dates.push_back(rec.date);
    } else {
      rec.year = year;
      out.years.push_back(year);
    }
    if (with_fields) rec.field = uniform_below(rng, 2) ? "a" : "b";
  }
  std::int64_t m = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(4 * n)));
  for (std::int64_t e = 0; e < m; ++e) {
    NodeId u = static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    NodeId v = static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    if (u == v) continue;
    out.raw_edges.emplace_back(u, v);
    if (uniform_below(rng, 16) == 0) out.raw_edges.emplace_back(u, v);  // duplicate
  }
  out.graph = CitationGraph::build(kind, std::move(recs), out.raw_edges);
  return out;
}

// ---- set-materializing oracle --------------------------------------------

struct OraclePartition {
  std::set<NodeId> f, b, r;
};

inline bool oracle_in_fb(const RandomGraph& g, NodeId focal, NodeId j, const CdWindow& window) {
  if (j == focal) return false;
  if (g.kind == DateKind::FullDate) {
    const Date& di = g.dates[static_cast<std::size_t>(focal)];
    const Date& dj = g.dates[static_cast<std::size_t>(j)];
    if (!(dj > di)) return false;
    return window.is_max || !(dj > di.plus_years(window.years));
  }
  std::int32_t yi = g.years[static_cast<std::size_t>(focal)];
  std::int32_t yj = g.years[static_cast<std::size_t>(j)];
  if (yj < yi) return false;
  return window.is_max || yj <= yi + window.years;
}

inline bool oracle_in_r(const RandomGraph& g, NodeId focal, NodeId j, const CdWindow& window) {
  if (g.kind == DateKind::FullDate) return oracle_in_fb(g, focal, j, window);
  if (j == focal) return false;
  std::int32_t yi = g.years[static_cast<std::size_t>(focal)];
  std::int32_t yj = g.years[static_cast<std::size_t>(j)];
  if (yj < yi + 1) return false;
  return window.is_max || yj <= yi + window.years;
}

// Deduplicated edge set and per-node reference lists, built once per
// graph straight from the raw pairs.
struct OracleIndex {
  const RandomGraph& g;
  std::set<std::pair<NodeId, NodeId>> edges;
  std::vector<std::vector<NodeId>> refs_of;

  explicit OracleIndex(const RandomGraph& graph)
      : g(graph), edges(graph.raw_edges.begin(), graph.raw_edges.end()),
        refs_of(static_cast<std::size_t>(graph.graph.n())) {
    for (const auto& [u, v] : edges) refs_of[static_cast<std::size_t>(u)].push_back(v);
  }
};

// Explicit F/B/R materialization with set semantics.
inline OraclePartition oracle_partition(const OracleIndex& index, NodeId focal,
                                        const CdWindow& window) {
  const RandomGraph& g = index.g;
  const auto& refs = index.refs_of[static_cast<std::size_t>(focal)];

  OraclePartition part;
  NodeId n = g.graph.n();
  for (NodeId j = 0; j < n; ++j) {
    if (j == focal) continue;
    bool cites_focal = index.edges.count({j, focal}) > 0;
    bool cites_ref = false;
    for (NodeId ref : refs)
      if (index.edges.count({j, ref})) {
        cites_ref = true;
        break;
      }
    if (cites_focal && oracle_in_fb(g, focal, j, window)) {
      if (cites_ref) part.b.insert(j);
      else part.f.insert(j);
    } else if (!cites_focal && cites_ref && oracle_in_r(g, focal, j, window)) {
      part.r.insert(j);
    }
  }
  return part;
}

inline CdValue oracle_cd(const OracleIndex& index, NodeId focal, const CdConfig& config) {
  const RandomGraph& g = index.g;
  OraclePartition part = oracle_partition(index, focal, config.window);
  double n_f = static_cast<double>(part.f.size());
  double n_b = static_cast<double>(part.b.size());
  double n_r = static_cast<double>(part.r.size());
  if (config.normalization == Normalization::Entity) {
    n_r = std::max(n_r - static_cast<double>(g.graph.out_degree(focal)), 0.0);
  } else if (config.normalization == Normalization::FieldYear) {
    std::int64_t sum = 0, count = 0;
    for (NodeId v = 0; v < g.graph.n(); ++v) {
      if (g.graph.year(v) == g.graph.year(focal) && g.graph.field(v) == g.graph.field(focal)) {
        sum += g.graph.out_degree(v);
        ++count;
      }
    }
    n_r = std::max(n_r - static_cast<double>(sum) / static_cast<double>(count), 0.0);
  }
  double denom = n_f + n_b + n_r;
  if (!(denom > 0.0)) return CdValue::undefined();
  return CdValue::of((n_f - n_b) / denom);
}

inline CdValue oracle_cd(const RandomGraph& g, NodeId focal, const CdConfig& config) {
  return oracle_cd(OracleIndex(g), focal, config);
}

// ---- slope test ------------------------------------------------------------

struct SlopeFit {
  double slope = 0.0;
  double se = 0.0;
  double t = 0.0;
};

inline SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points) {
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  double intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (const auto& [x, y] : points) {
    double e = y - intercept - fit.slope * x;
    sse += e * e;
  }
  fit.se = std::sqrt(sse / (n - 2.0) / sxx);
  fit.t = fit.slope / fit.se;
  return fit;
}

// Year means restricted to [lo, hi] as slope input.
inline std::vector<std::pair<double, double>> series_points(const YearSeries& series,
                                                            std::int32_t lo, std::int32_t hi) {
  std::vector<std::pair<double, double>> points;
  for (const auto& row : series.rows)
    if (row.year >= lo && row.year <= hi)
      points.emplace_back(static_cast<double>(row.year), row.mean);
  return points;
}

// ---- discontinuity corpus ---------------------------------------------------

// Fixture for the adjustment regression: nodes spread over years, fields,
// and reference counts 0..k_max, citing dateless-looking "base" targets in
// an earlier year (no field, so they drop out of designs). The response is
// fabricated: exactly 1.0 at zero references when `discontinuity`, else a
// gentle linear trend in the reference count plus noise.
struct DiscontinuityCorpus {
  CitationGraph graph;
  std::vector<NodeCd> values;
};

inline DiscontinuityCorpus make_discontinuity_corpus(std::uint64_t seed, bool discontinuity,
                                                     std::int32_t years = 10,
                                                     std::int32_t per_cell = 5,
                                                     std::int32_t k_max = 20) {
  Rng rng(seed);
  const std::int32_t base_year = 2000;
  const std::int32_t n_base = std::max<std::int32_t>(k_max, 1);
  std::vector<NodeRecord> recs;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId b = 0; b < n_base; ++b)
    recs.push_back({"base" + std::to_string(b), {}, base_year, "", -1});

  std::vector<bool> zero_ref_row;
  std::vector<std::int32_t> refcount_row;
  for (std::int32_t y = base_year + 1; y <= base_year + years; ++y) {
    for (const char* field : {"left", "right"}) {
      for (std::int32_t k = 0; k <= k_max; ++k) {
        for (std::int32_t rep = 0; rep < per_cell; ++rep) {
          NodeId id = static_cast<NodeId>(recs.size());
          recs.push_back({"p" + std::to_string(id), {}, y, field,
                          1 + static_cast<std::int32_t>(uniform_below(rng, 4))});
          for (std::int32_t t = 0; t < k; ++t)
            edges.emplace_back(id, static_cast<NodeId>(t));
          zero_ref_row.push_back(k == 0);
          refcount_row.push_back(k);
        }
      }
    }
  }

  DiscontinuityCorpus corpus{
      CitationGraph::build(DateKind::YearOnly, std::move(recs), std::move(edges)), {}};
  corpus.values.resize(static_cast<std::size_t>(corpus.graph.n()));
  std::size_t row = 0;
  for (NodeId v = 0; v < corpus.graph.n(); ++v) {
    auto& cell = corpus.values[static_cast<std::size_t>(v)];
    if (corpus.graph.year(v) == base_year) {
      cell.cd = CdValue::undefined();  // base targets carry no response
      continue;
    }
    double noise = (uniform01(rng) - 0.5) * 0.02;  // sd ~ 0.0058
    if (discontinuity && zero_ref_row[row]) {
      cell.cd = CdValue::of(1.0);
    } else {
      cell.cd = CdValue::of(0.3 - 0.005 * static_cast<double>(refcount_row[row]) + noise);
    }
    ++row;
  }
  return corpus;
}

// ---- scratch files -----------------------------------------------------------

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("disruptix_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string dir() const { return path_.string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::string p = file(name);
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testsupport
