#include "disruptix/graph.hpp"

#include <algorithm>

#include "disruptix/errors.hpp"

namespace disruptix {

CitationGraph CitationGraph::build(DateKind kind, std::vector<NodeRecord> nodes,
                                   std::vector<std::pair<NodeId, NodeId>> edges,
                                   BuildSummary* summary) {
  CitationGraph g;
  g.kind_ = kind;
  const std::size_t n = nodes.size();
  g.keys_.reserve(n);
  g.years_.reserve(n);
  g.fields_.reserve(n);
  g.authors_.reserve(n);
  if (kind == DateKind::FullDate) g.dates_.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    auto& rec = nodes[i];
    auto [it, inserted] = g.key_to_id_.emplace(rec.key, static_cast<NodeId>(i));
    if (!inserted) throw SchemaError("duplicate node key: " + rec.key);
    g.keys_.push_back(std::move(rec.key));
    if (kind == DateKind::FullDate) {
      g.dates_.push_back(rec.date);
      g.years_.push_back(rec.date.year);
    } else {
      g.years_.push_back(rec.year);
    }
    g.fields_.push_back(std::move(rec.field));
    g.authors_.push_back(rec.n_authors);
  }

  BuildSummary local;
  local.nodes = static_cast<std::int64_t>(n);
  local.edges_in = static_cast<std::int64_t>(edges.size());

  // Set semantics: drop self-loops, collapse duplicates.
  std::erase_if(edges, [&](const auto& e) {
    if (e.first == e.second) {
      ++local.self_loops;
      return true;
    }
    return false;
  });
  std::sort(edges.begin(), edges.end());
  auto last = std::unique(edges.begin(), edges.end());
  local.duplicate_edges = static_cast<std::int64_t>(edges.end() - last);
  edges.erase(last, edges.end());
  local.edges_kept = static_cast<std::int64_t>(edges.size());

  const std::size_t m = edges.size();
  g.out_off_.assign(n + 1, 0);
  g.in_off_.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
      throw SchemaError("edge endpoint out of range");
    g.out_off_[static_cast<std::size_t>(u) + 1]++;
    g.in_off_[static_cast<std::size_t>(v) + 1]++;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    g.out_off_[i] += g.out_off_[i - 1];
    g.in_off_[i] += g.in_off_[i - 1];
  }
  g.out_adj_.resize(m);
  g.in_adj_.resize(m);
  std::vector<std::int64_t> ocur(g.out_off_.begin(), g.out_off_.end() - 1);
  std::vector<std::int64_t> icur(g.in_off_.begin(), g.in_off_.end() - 1);
  // Edges are sorted by (citer, cited), so out-lists fill in ascending
  // order; in-lists need a final sort.
  for (const auto& [u, v] : edges) {
    g.out_adj_[static_cast<std::size_t>(ocur[static_cast<std::size_t>(u)]++)] = v;
    g.in_adj_[static_cast<std::size_t>(icur[static_cast<std::size_t>(v)]++)] = u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(g.in_adj_.begin() + g.in_off_[v], g.in_adj_.begin() + g.in_off_[v + 1]);
  }

  if (summary) *summary = local;
  return g;
}

CitationGraph CitationGraph::with_edges(const CitationGraph& proto,
                                        std::vector<std::pair<NodeId, NodeId>> edges) {
  std::vector<NodeRecord> nodes(static_cast<std::size_t>(proto.n()));
  for (NodeId v = 0; v < proto.n(); ++v) {
    auto& rec = nodes[static_cast<std::size_t>(v)];
    rec.key = proto.key(v);
    rec.year = proto.year(v);
    if (proto.kind() == DateKind::FullDate) rec.date = proto.date(v);
    rec.field = proto.field(v);
    rec.n_authors = proto.authors_[static_cast<std::size_t>(v)];
  }
  return build(proto.kind(), std::move(nodes), std::move(edges));
}

NodeId CitationGraph::id_of(const std::string& key) const {
  auto it = key_to_id_.find(key);
  return it == key_to_id_.end() ? NodeId{-1} : it->second;
}

bool CitationGraph::has_edge(NodeId citer, NodeId cited) const {
  auto nbrs = out_neighbors(citer);
  return std::binary_search(nbrs.begin(), nbrs.end(), cited);
}

std::vector<std::pair<NodeId, NodeId>> CitationGraph::edge_list() const {
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(static_cast<std::size_t>(m()));
  for (NodeId u = 0; u < n(); ++u)
    for (NodeId v : out_neighbors(u)) edges.emplace_back(u, v);
  return edges;
}

TemporalViolationReport validate_temporal(const CitationGraph& graph) {
  TemporalViolationReport report;
  for (NodeId u = 0; u < graph.n(); ++u) {
    for (NodeId v : graph.out_neighbors(u)) {
      bool violates = graph.kind() == DateKind::FullDate
                          ? !(graph.date(u) > graph.date(v))
                          : graph.year(u) < graph.year(v);
      if (violates) {
        ++report.count;
        if (report.sample.size() < TemporalViolationReport::kSampleCap)
          report.sample.emplace_back(u, v);
      }
    }
  }
  return report;
}

DegreeTable degrees(const CitationGraph& graph) {
  DegreeTable table;
  table.in.resize(static_cast<std::size_t>(graph.n()));
  table.out.resize(static_cast<std::size_t>(graph.n()));
  for (NodeId v = 0; v < graph.n(); ++v) {
    table.in[static_cast<std::size_t>(v)] = graph.in_degree(v);
    table.out[static_cast<std::size_t>(v)] = graph.out_degree(v);
  }
  return table;
}

}  // namespace disruptix
