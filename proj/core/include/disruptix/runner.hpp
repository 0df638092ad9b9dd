#pragma once

#include <string>

#include "disruptix/artefact.hpp"
#include "disruptix/cd_index.hpp"
#include "disruptix/histogram.hpp"
#include "disruptix/io.hpp"
#include "disruptix/regression.hpp"
#include "disruptix/rewiring.hpp"
#include "disruptix/synthgen.hpp"

namespace disruptix {

// One CLI invocation. The subcommand decides which sections are read.
// Every subcommand writes deterministic artifacts into out_dir and emits
// key=value progress lines on standard error.
struct RunConfig {
  std::string subcommand;  // ingest|cd|filter|rewire|zscore|regress|hist|synth|report

  std::string nodes_path;
  std::string edges_path;
  std::string values_path;  // hist: reuse an exported per-node CSV
  Schema schema;

  CdConfig cd;
  bool by_field = false;
  ExclusionPolicy policy = ExclusionPolicy::DropZeroRefCdOne;
  RewireConfig rewire;
  RegressionSpec regression;
  std::int32_t sweep_k_max = 0;  // > 0 runs the dummy sweep
  std::int32_t rmse_cap = 100;
  HistogramSpec hist;
  SynthConfig synth;

  std::string out_dir = "out";
};

// Executes the subcommand. Throws IoError / SchemaError / NumericError;
// the CLI maps these to exit codes 2 / 3 / 4.
void run(const RunConfig& config);

}  // namespace disruptix
