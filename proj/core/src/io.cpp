#include "disruptix/io.hpp"

#include <charconv>
#include <fstream>

#include "disruptix/csv.hpp"
#include "disruptix/errors.hpp"

namespace disruptix {

namespace {

struct Line {
  std::string text;
  std::int64_t number = 0;  // 1-based, header included
};

class LineReader {
 public:
  explicit LineReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open: " + path);
  }

  bool next(Line& line) {
    while (std::getline(in_, line.text)) {
      ++number_;
      if (!line.text.empty() && line.text.back() == '\r') line.text.pop_back();
      if (line.text.empty()) continue;  // blank lines are ignored
      line.number = number_;
      return true;
    }
    return false;
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::int64_t number_ = 0;
};

[[noreturn]] void fail_at(const std::string& path, std::int64_t line, const std::string& what) {
  throw SchemaError(path + ":" + std::to_string(line) + ": " + what);
}

int require_column(const std::vector<std::string_view>& header, const std::string& name,
                   const std::string& path) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  throw SchemaError(path + ": missing required column '" + name + "'");
}

int optional_column(const std::vector<std::string_view>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

bool parse_count(std::string_view s, std::int32_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && out >= 0;
}

}  // namespace

LoadResult load_graph(const std::string& nodes_path, const std::string& edges_path,
                      const Schema& schema) {
  std::vector<NodeRecord> nodes;
  std::optional<DateKind> kind = schema.resolution;

  {
    LineReader reader(nodes_path);
    Line line;
    if (!reader.next(line)) throw SchemaError(nodes_path + ": empty file");
    auto header = split_fields(line.text, schema.delimiter);
    int id_col = require_column(header, schema.id_col, nodes_path);
    int date_col = require_column(header, schema.date_col, nodes_path);
    int field_col = optional_column(header, schema.field_col);
    int authors_col = optional_column(header, schema.authors_col);
    int ncols = static_cast<int>(header.size());

    while (reader.next(line)) {
      auto cells = split_fields(line.text, schema.delimiter);
      if (static_cast<int>(cells.size()) != ncols)
        fail_at(nodes_path, line.number, "expected " + std::to_string(ncols) + " columns, got " +
                                             std::to_string(cells.size()));
      NodeRecord rec;
      rec.key = std::string(cells[static_cast<std::size_t>(id_col)]);
      if (rec.key.empty()) fail_at(nodes_path, line.number, "empty id");

      std::string_view date_text = cells[static_cast<std::size_t>(date_col)];
      Date date;
      std::int32_t year;
      bool as_date = parse_date(date_text, date);
      bool as_year = !as_date && parse_year(date_text, year);
      if (!as_date && !as_year)
        fail_at(nodes_path, line.number, "unparseable date '" + std::string(date_text) + "'");
      DateKind row_kind = as_date ? DateKind::FullDate : DateKind::YearOnly;
      if (!kind) kind = row_kind;
      if (row_kind != *kind) {
        if (schema.resolution)
          fail_at(nodes_path, line.number,
                  "date '" + std::string(date_text) + "' does not match the declared resolution");
        fail_at(nodes_path, line.number, "mixed date kinds in one file");
      }
      if (as_date) {
        rec.date = date;
      } else {
        rec.year = year;
      }
      if (field_col >= 0) rec.field = std::string(cells[static_cast<std::size_t>(field_col)]);
      if (authors_col >= 0) {
        std::string_view a = cells[static_cast<std::size_t>(authors_col)];
        if (!a.empty()) {
          std::int32_t count;
          if (!parse_count(a, count))
            fail_at(nodes_path, line.number, "invalid author count '" + std::string(a) + "'");
          rec.n_authors = count;
        }
      }
      nodes.push_back(std::move(rec));
    }
  }
  if (!kind) kind = DateKind::YearOnly;  // empty node file

  // Key -> dense id in file order.
  std::unordered_map<std::string, NodeId> ids;
  ids.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!ids.emplace(nodes[i].key, static_cast<NodeId>(i)).second)
      throw SchemaError(nodes_path + ": duplicate node id '" + nodes[i].key + "'");
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  {
    LineReader reader(edges_path);
    Line line;
    if (!reader.next(line)) throw SchemaError(edges_path + ": empty file");
    auto header = split_fields(line.text, schema.delimiter);
    int citer_col = require_column(header, schema.citer_col, edges_path);
    int cited_col = require_column(header, schema.cited_col, edges_path);
    int ncols = static_cast<int>(header.size());

    while (reader.next(line)) {
      auto cells = split_fields(line.text, schema.delimiter);
      if (static_cast<int>(cells.size()) != ncols)
        fail_at(edges_path, line.number, "expected " + std::to_string(ncols) + " columns, got " +
                                             std::to_string(cells.size()));
      auto lookup = [&](std::string_view key) {
        auto it = ids.find(std::string(key));
        if (it == ids.end())
          fail_at(edges_path, line.number, "edge references unknown node '" + std::string(key) + "'");
        return it->second;
      };
      edges.emplace_back(lookup(cells[static_cast<std::size_t>(citer_col)]),
                         lookup(cells[static_cast<std::size_t>(cited_col)]));
    }
  }

  LoadResult result{CitationGraph{}, BuildSummary{}};
  result.graph = CitationGraph::build(*kind, std::move(nodes), std::move(edges), &result.summary);
  return result;
}

void write_nodes_csv(const CitationGraph& graph, const std::string& path) {
  bool any_field = false, any_authors = false;
  for (NodeId v = 0; v < graph.n(); ++v) {
    any_field |= graph.has_field(v);
    any_authors |= graph.has_authors(v);
  }
  CsvWriter out(path);
  std::vector<std::string> row{"id", "date"};
  if (any_field) row.push_back("field");
  if (any_authors) row.push_back("n_authors");
  out.row(row);
  for (NodeId v = 0; v < graph.n(); ++v) {
    row.clear();
    row.push_back(graph.key(v));
    row.push_back(graph.kind() == DateKind::FullDate ? graph.date(v).to_string()
                                                     : std::to_string(graph.year(v)));
    if (any_field) row.push_back(graph.field(v));
    if (any_authors)
      row.push_back(graph.has_authors(v) ? std::to_string(graph.n_authors(v)) : std::string{});
    out.row(row);
  }
  out.close();
}

void write_edges_csv(const CitationGraph& graph, const std::string& path) {
  CsvWriter out(path);
  out.row({"citer", "cited"});
  for (NodeId u = 0; u < graph.n(); ++u)
    for (NodeId v : graph.out_neighbors(u)) out.row({graph.key(u), graph.key(v)});
  out.close();
}

}  // namespace disruptix
