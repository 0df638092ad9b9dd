#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disruptix/graph.hpp"

namespace disruptix {

enum class Attachment { UniformPast, PreferentialPast };

// Node classes recorded in the ground-truth table.
//   artefact:   zero references by construction, guaranteed at least one
//               citation from the following year (same year for the final
//               cohort, where no later one exists)
//   structural: first-year node with nothing earlier to cite
//   normal:     draws references from the eligible past
enum class SynthClass { Normal, Artefact, Structural };

struct FieldMix {
  std::string label;
  double weight = 1.0;
};

struct SynthConfig {
  std::uint64_t seed = 17;
  std::int32_t year_start = 2000;
  std::int32_t year_end = 2029;  // inclusive
  std::int32_t nodes_per_year = 500;
  // Fraction of each cohort recorded with zero references; length must
  // equal the year count. Default: linear 0.30 -> 0.05.
  std::vector<double> artefact_share_schedule;
  // Reference-count distribution for normal nodes, weights over 1..R.
  // Default: uniform on 20..40, dense enough that the mean defined index
  // of referencing nodes does not move with the artefact share.
  std::vector<double> ref_count_weights = uniform_ref_weights(20, 40);

  static std::vector<double> uniform_ref_weights(std::int32_t lo, std::int32_t hi);
  Attachment attachment = Attachment::UniformPast;
  // Citation targets are drawn from the previous recency_years cohorts
  // (0 = entire past). A bounded horizon keeps citation behaviour
  // identical across interior years.
  std::int32_t recency_years = 5;
  std::vector<FieldMix> fields = {{"f1", 0.6}, {"f2", 0.4}};
  std::int32_t max_authors = 5;  // n_authors uniform on 1..max; 0 disables

  static SynthConfig defaults();
};

struct SynthResult {
  CitationGraph graph;
  std::vector<SynthClass> truth;  // by node id
};

// Deterministic given the config. Year-only resolution; edges always run
// from the same or a later year to an earlier one, so temporal validation
// reports zero violations.
SynthResult generate(const SynthConfig& config);

// CSV: id,class with class in {artefact,structural,normal}.
void write_truth_csv(const SynthResult& result, const std::string& path);

const char* synth_class_name(SynthClass c);

}  // namespace disruptix
