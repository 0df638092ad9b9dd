#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "disruptix/date.hpp"

namespace disruptix {

using NodeId = std::int32_t;

struct NodeRecord {
  std::string key;                // external source identifier
  Date date;                      // FullDate graphs only
  std::int32_t year = 0;          // YearOnly graphs; derived from date otherwise
  std::string field;              // empty = unlabeled
  std::int32_t n_authors = -1;    // -1 = unknown
};

struct BuildSummary {
  std::int64_t nodes = 0;
  std::int64_t edges_in = 0;        // pairs offered to the builder
  std::int64_t edges_kept = 0;
  std::int64_t duplicate_edges = 0;
  std::int64_t self_loops = 0;
};

// Edges where the citer does not postdate the cited work: citer date <=
// cited date for full-date graphs, citer year < cited year for year-only
// graphs (same-year citations are legitimate at year resolution).
struct TemporalViolationReport {
  std::int64_t count = 0;
  std::vector<std::pair<NodeId, NodeId>> sample;  // capped

  static constexpr std::size_t kSampleCap = 32;
};

struct DegreeTable {
  std::vector<std::int32_t> in;
  std::vector<std::int32_t> out;
};

// Immutable directed temporal citation network. Edges run citer -> cited,
// so out-degree counts references and in-degree counts forward citations.
// Duplicate edges and self-loops are dropped at construction (sets of
// papers, not citation events). Immutable after build; safe to share
// across threads.
class CitationGraph {
 public:
  // `edges` holds internal-id pairs. External keys must already be dense
  // 0..n-1 mapped; io.hpp does that for files, synthgen for generators.
  static CitationGraph build(DateKind kind, std::vector<NodeRecord> nodes,
                             std::vector<std::pair<NodeId, NodeId>> edges,
                             BuildSummary* summary = nullptr);

  // Same node set and metadata, different edges (used by rewiring).
  static CitationGraph with_edges(const CitationGraph& proto,
                                  std::vector<std::pair<NodeId, NodeId>> edges);

  DateKind kind() const { return kind_; }
  NodeId n() const { return static_cast<NodeId>(keys_.size()); }
  std::int64_t m() const { return static_cast<std::int64_t>(out_adj_.size()); }

  const std::string& key(NodeId v) const { return keys_[static_cast<std::size_t>(v)]; }
  std::int32_t year(NodeId v) const { return years_[static_cast<std::size_t>(v)]; }
  const Date& date(NodeId v) const { return dates_[static_cast<std::size_t>(v)]; }
  bool has_field(NodeId v) const { return !fields_[static_cast<std::size_t>(v)].empty(); }
  const std::string& field(NodeId v) const { return fields_[static_cast<std::size_t>(v)]; }
  bool has_authors(NodeId v) const { return authors_[static_cast<std::size_t>(v)] >= 0; }
  std::int32_t n_authors(NodeId v) const { return authors_[static_cast<std::size_t>(v)]; }

  // -1 when the key is unknown.
  NodeId id_of(const std::string& key) const;

  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {out_adj_.data() + out_off_[static_cast<std::size_t>(v)],
            out_adj_.data() + out_off_[static_cast<std::size_t>(v) + 1]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_adj_.data() + in_off_[static_cast<std::size_t>(v)],
            in_adj_.data() + in_off_[static_cast<std::size_t>(v) + 1]};
  }
  std::int32_t out_degree(NodeId v) const {
    return static_cast<std::int32_t>(out_off_[static_cast<std::size_t>(v) + 1] -
                                     out_off_[static_cast<std::size_t>(v)]);
  }
  std::int32_t in_degree(NodeId v) const {
    return static_cast<std::int32_t>(in_off_[static_cast<std::size_t>(v) + 1] -
                                     in_off_[static_cast<std::size_t>(v)]);
  }

  bool has_edge(NodeId citer, NodeId cited) const;

  // Edge list in deterministic order (by citer, then cited).
  std::vector<std::pair<NodeId, NodeId>> edge_list() const;

 private:
  DateKind kind_ = DateKind::YearOnly;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, NodeId> key_to_id_;
  std::vector<Date> dates_;
  std::vector<std::int32_t> years_;
  std::vector<std::string> fields_;
  std::vector<std::int32_t> authors_;
  // CSR adjacency, neighbor lists sorted ascending.
  std::vector<std::int64_t> out_off_, in_off_;
  std::vector<NodeId> out_adj_, in_adj_;
};

TemporalViolationReport validate_temporal(const CitationGraph& graph);

// Per-node (in, out) degree arrays; sums of both equal m().
DegreeTable degrees(const CitationGraph& graph);

}  // namespace disruptix
