#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disruptix/cd_index.hpp"
#include "disruptix/graph.hpp"

namespace disruptix {

// Per-node artefact markers. cd_eq_one uses exact floating-point equality,
// which is safe: a zero-reference node's defined value arises as k/k.
// defined is carried along so frequency denominators need no second pass
// over the values.
struct ArtefactFlags {
  std::vector<bool> zero_ref;
  std::vector<bool> cd_eq_one;
  std::vector<bool> defined;
};

enum class ExclusionPolicy {
  None,
  DropCdOne,         // defined and exactly 1.0
  DropZeroRef,       // zero recorded references
  DropZeroRefCdOne,  // both
};

ArtefactFlags flag(const CitationGraph& graph, const std::vector<NodeCd>& values);

// Share of zero-reference nodes within the CD=1 population, overall and
// per publication year. Years whose CD=1 count is zero report a missing
// share.
struct ShareRow {
  std::int32_t year = 0;
  std::int64_t n_cd_one = 0;
  std::int64_t n_zero_ref = 0;
  bool available = false;
  double share = 0.0;
};

struct ShareReport {
  bool overall_available = false;
  double overall = 0.0;
  std::int64_t n_cd_one = 0;
  std::int64_t n_zero_ref = 0;
  std::vector<ShareRow> per_year;  // every year holding at least one node
};

ShareReport share_zero_ref_within_cd_one(const ArtefactFlags& flags, const CitationGraph& graph);

// Relative frequency of zero-reference CD=1 nodes among nodes with a
// defined index, per year. Missing when a year has no defined values.
struct FrequencyRow {
  std::int32_t year = 0;
  std::int64_t n_defined = 0;
  std::int64_t n_flagged = 0;
  bool available = false;
  double share = 0.0;
};

std::vector<FrequencyRow> relative_frequency_series(const ArtefactFlags& flags,
                                                    const CitationGraph& graph);

// Applies the policy, then aggregates exactly like yearly_mean. None
// reproduces the unfiltered series.
std::vector<YearSeries> filtered_yearly_mean(const std::vector<NodeCd>& values,
                                             const ArtefactFlags& flags,
                                             const CitationGraph& graph, ExclusionPolicy policy,
                                             bool group_by_field = false);

// CSV: year,n_defined,n_flagged,share (share empty when missing).
void write_frequency_csv(const std::vector<FrequencyRow>& rows, const std::string& path);

// CSV: year,n_cd_one,n_zero_ref,share (share empty when missing).
void write_share_csv(const ShareReport& report, const std::string& path);

const char* policy_name(ExclusionPolicy policy);

}  // namespace disruptix
