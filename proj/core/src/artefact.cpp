#include "disruptix/artefact.hpp"

#include <map>

#include "disruptix/csv.hpp"
#include "disruptix/errors.hpp"

namespace disruptix {

ArtefactFlags flag(const CitationGraph& graph, const std::vector<NodeCd>& values) {
  if (values.size() != static_cast<std::size_t>(graph.n()))
    throw SchemaError("flag: values were not computed on this graph");
  ArtefactFlags flags;
  flags.zero_ref.resize(values.size());
  flags.cd_eq_one.resize(values.size());
  flags.defined.resize(values.size());
  for (NodeId v = 0; v < graph.n(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    flags.zero_ref[i] = graph.out_degree(v) == 0;
    flags.cd_eq_one[i] = values[i].cd.defined && values[i].cd.value == 1.0;
    flags.defined[i] = values[i].cd.defined;
  }
  return flags;
}

ShareReport share_zero_ref_within_cd_one(const ArtefactFlags& flags, const CitationGraph& graph) {
  ShareReport report;
  std::map<std::int32_t, ShareRow> rows;
  for (NodeId v = 0; v < graph.n(); ++v) {
    auto& row = rows[graph.year(v)];
    row.year = graph.year(v);
    const auto i = static_cast<std::size_t>(v);
    if (flags.cd_eq_one[i]) {
      ++row.n_cd_one;
      ++report.n_cd_one;
      if (flags.zero_ref[i]) {
        ++row.n_zero_ref;
        ++report.n_zero_ref;
      }
    }
  }
  for (auto& [year, row] : rows) {
    if (row.n_cd_one > 0) {
      row.available = true;
      row.share = static_cast<double>(row.n_zero_ref) / static_cast<double>(row.n_cd_one);
    }
    report.per_year.push_back(row);
  }
  if (report.n_cd_one > 0) {
    report.overall_available = true;
    report.overall = static_cast<double>(report.n_zero_ref) / static_cast<double>(report.n_cd_one);
  }
  return report;
}

std::vector<FrequencyRow> relative_frequency_series(const ArtefactFlags& flags,
                                                    const CitationGraph& graph) {
  std::map<std::int32_t, FrequencyRow> rows;
  for (NodeId v = 0; v < graph.n(); ++v) {
    auto& row = rows[graph.year(v)];
    row.year = graph.year(v);
    const auto i = static_cast<std::size_t>(v);
    // Denominator counts defined values only; flagged nodes are a subset
    // since cd_eq_one implies defined.
    if (flags.defined[i]) ++row.n_defined;
    if (flags.cd_eq_one[i] && flags.zero_ref[i]) ++row.n_flagged;
  }
  std::vector<FrequencyRow> out;
  out.reserve(rows.size());
  for (auto& [year, row] : rows) {
    if (row.n_defined > 0) {
      row.available = true;
      row.share = static_cast<double>(row.n_flagged) / static_cast<double>(row.n_defined);
    }
    out.push_back(row);
  }
  return out;
}

std::vector<YearSeries> filtered_yearly_mean(const std::vector<NodeCd>& values,
                                             const ArtefactFlags& flags,
                                             const CitationGraph& graph, ExclusionPolicy policy,
                                             bool group_by_field) {
  std::vector<NodeCd> kept = values;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool drop = false;
    switch (policy) {
      case ExclusionPolicy::None:
        break;
      case ExclusionPolicy::DropCdOne:
        drop = flags.cd_eq_one[i];
        break;
      case ExclusionPolicy::DropZeroRef:
        drop = flags.zero_ref[i];
        break;
      case ExclusionPolicy::DropZeroRefCdOne:
        drop = flags.zero_ref[i] && flags.cd_eq_one[i];
        break;
    }
    if (drop) kept[i].cd = CdValue::undefined();
  }
  return yearly_mean(kept, graph, group_by_field);
}

void write_frequency_csv(const std::vector<FrequencyRow>& rows, const std::string& path) {
  CsvWriter out(path);
  out.row({"year", "n_defined", "n_flagged", "share"});
  for (const auto& row : rows) {
    out.row({std::to_string(row.year), std::to_string(row.n_defined),
             std::to_string(row.n_flagged), row.available ? format_double(row.share) : ""});
  }
  out.close();
}

void write_share_csv(const ShareReport& report, const std::string& path) {
  CsvWriter out(path);
  out.row({"year", "n_cd_one", "n_zero_ref", "share"});
  for (const auto& row : report.per_year) {
    out.row({std::to_string(row.year), std::to_string(row.n_cd_one),
             std::to_string(row.n_zero_ref), row.available ? format_double(row.share) : ""});
  }
  out.close();
}

const char* policy_name(ExclusionPolicy policy) {
  switch (policy) {
    case ExclusionPolicy::None: return "none";
    case ExclusionPolicy::DropCdOne: return "cd1";
    case ExclusionPolicy::DropZeroRef: return "zeroref";
    case ExclusionPolicy::DropZeroRefCdOne: return "zeroref-cd1";
  }
  return "none";
}

}  // namespace disruptix
