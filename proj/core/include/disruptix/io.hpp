#pragma once

#include <optional>
#include <string>

#include "disruptix/graph.hpp"

namespace disruptix {

// Column mapping for delimited node/edge files with a header row.
// Node file: id,date[,field][,n_authors]; edge file: citer,cited.
// Dates are ISO-8601 for full-date corpora, bare integers for year-only;
// resolution may be pinned or auto-detected from the first data row.
struct Schema {
  char delimiter = ',';
  std::optional<DateKind> resolution;  // nullopt = detect
  std::string id_col = "id";
  std::string date_col = "date";
  std::string field_col = "field";
  std::string authors_col = "n_authors";
  std::string citer_col = "citer";
  std::string cited_col = "cited";
};

struct LoadResult {
  CitationGraph graph;
  BuildSummary summary;
};

// Validated load: dense internal ids in file order, duplicate edges and
// self-loops dropped and counted. Throws SchemaError with the offending
// line number for unparseable rows, for edges naming unknown keys, and
// for mixed date kinds.
LoadResult load_graph(const std::string& nodes_path, const std::string& edges_path,
                      const Schema& schema = {});

// Canonical exports in the same format load_graph reads, enabling exact
// round-trips. Column set mirrors what the graph carries.
void write_nodes_csv(const CitationGraph& graph, const std::string& path);
void write_edges_csv(const CitationGraph& graph, const std::string& path);

}  // namespace disruptix
