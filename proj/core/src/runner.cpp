#include "disruptix/runner.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "disruptix/csv.hpp"
#include "disruptix/errors.hpp"

namespace disruptix {

namespace {

namespace fs = std::filesystem;

void note(const std::string& key, const std::string& value) {
  std::cerr << key << "=" << value << "\n";
}

std::string joined(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

LoadResult load_input(const RunConfig& config) {
  if (config.nodes_path.empty() || config.edges_path.empty())
    throw SchemaError(config.subcommand + ": --nodes and --edges are required");
  LoadResult loaded = load_graph(config.nodes_path, config.edges_path, config.schema);
  note("nodes", std::to_string(loaded.summary.nodes));
  note("edges_in", std::to_string(loaded.summary.edges_in));
  note("edges_kept", std::to_string(loaded.summary.edges_kept));
  note("duplicate_edges", std::to_string(loaded.summary.duplicate_edges));
  note("self_loops", std::to_string(loaded.summary.self_loops));
  return loaded;
}

CdConfig resolved_cd(const RunConfig& config, const CitationGraph& graph) {
  CdConfig cd = config.cd;
  cd.resolution = graph.kind();  // the flag is validated at parse time; data wins
  return cd;
}

std::vector<double> defined_values(const std::vector<NodeCd>& values) {
  std::vector<double> out;
  for (const auto& v : values)
    if (v.cd.defined) out.push_back(v.cd.value);
  return out;
}

// Values for `hist` can come from a per-node CSV export instead of a
// graph; only the cd/defined columns are needed.
std::vector<double> values_from_csv(const std::string& path) {
  CsvTable table = read_csv(path);
  int cd_col = table.column("cd");
  int defined_col = table.column("defined");
  if (cd_col < 0 || defined_col < 0)
    throw SchemaError(path + ": expected per-node columns 'cd' and 'defined'");
  std::vector<double> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[static_cast<std::size_t>(defined_col)] != "1") continue;
    const std::string& cell = row[static_cast<std::size_t>(cd_col)];
    double v;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
      throw SchemaError(path + ": bad cd value '" + cell + "' in row " + std::to_string(r + 2));
    out.push_back(v);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

// Unfiltered and policy-filtered year series; by-field variants appended
// as separate files when requested.
void write_filtered_series(const RunConfig& config, const CitationGraph& graph,
                           const std::vector<NodeCd>& values, const ArtefactFlags& flags) {
  std::string policy_file = std::string("series_") + policy_name(config.policy);
  write_year_series_csv(filtered_yearly_mean(values, flags, graph, ExclusionPolicy::None),
                        joined(config.out_dir, "series_none.csv"));
  write_year_series_csv(filtered_yearly_mean(values, flags, graph, config.policy),
                        joined(config.out_dir, policy_file + ".csv"));
  if (config.by_field) {
    write_year_series_csv(
        filtered_yearly_mean(values, flags, graph, ExclusionPolicy::None, true),
        joined(config.out_dir, "series_none_by_field.csv"));
    write_year_series_csv(filtered_yearly_mean(values, flags, graph, config.policy, true),
                          joined(config.out_dir, policy_file + "_by_field.csv"));
  }
}

void run_ingest(const RunConfig& config) {
  LoadResult loaded = load_input(config);
  auto report = validate_temporal(loaded.graph);
  note("temporal_violations", std::to_string(report.count));
  for (const auto& [u, v] : report.sample)
    note("violation", loaded.graph.key(u) + "->" + loaded.graph.key(v));
  ensure_out_dir(config.out_dir);
  write_nodes_csv(loaded.graph, joined(config.out_dir, "nodes.csv"));
  write_edges_csv(loaded.graph, joined(config.out_dir, "edges.csv"));
}

void run_cd(const RunConfig& config) {
  LoadResult loaded = load_input(config);
  CdConfig cd_config = resolved_cd(config, loaded.graph);
  auto values = cd_all(loaded.graph, cd_config);
  ensure_out_dir(config.out_dir);
  write_per_node_csv(loaded.graph, values, joined(config.out_dir, "per_node.csv"));
  write_year_series_csv(yearly_mean(values, loaded.graph),
                        joined(config.out_dir, "year_series.csv"));
  if (config.by_field)
    write_year_series_csv(yearly_mean(values, loaded.graph, true),
                          joined(config.out_dir, "year_series_by_field.csv"));
}

void run_filter(const RunConfig& config) {
  LoadResult loaded = load_input(config);
  CdConfig cd_config = resolved_cd(config, loaded.graph);
  auto values = cd_all(loaded.graph, cd_config);
  auto flags = flag(loaded.graph, values);
  ensure_out_dir(config.out_dir);

  ShareReport share = share_zero_ref_within_cd_one(flags, loaded.graph);
  if (share.overall_available) note("share_zero_ref_within_cd1", format_double(share.overall));
  write_share_csv(share, joined(config.out_dir, "share_zero_ref_within_cd1.csv"));
  write_frequency_csv(relative_frequency_series(flags, loaded.graph),
                      joined(config.out_dir, "artefact_frequency.csv"));
  write_filtered_series(config, loaded.graph, values, flags);
}

void run_rewire(const RunConfig& config) {
  LoadResult loaded = load_input(config);
  CdConfig cd_config = resolved_cd(config, loaded.graph);
  ensure_out_dir(config.out_dir);

  auto observed_series = yearly_mean(cd_all(loaded.graph, cd_config), loaded.graph);
  YearSeries observed = observed_series.empty() ? YearSeries{"all", {}} : observed_series.front();
  observed.group = "observed";
  write_year_series_csv({observed}, joined(config.out_dir, "observed_series.csv"));

  std::vector<YearSeries> per_run(static_cast<std::size_t>(config.rewire.runs));
  for (std::int32_t r = 0; r < config.rewire.runs; ++r) {
    RewireResult res = rewire(loaded.graph, config.rewire, r);
    note("run" + std::to_string(r) + "_retained", std::to_string(res.retained));
    note("run" + std::to_string(r) + "_attempts", std::to_string(res.attempts));
    if (res.saturated) note("run" + std::to_string(r) + "_saturated", "1");
    write_edges_csv(res.graph, joined(config.out_dir, "edges_run" + std::to_string(r) + ".csv"));
    auto series = yearly_mean(cd_all(res.graph, cd_config), res.graph);
    YearSeries run_series = series.empty() ? YearSeries{"all", {}} : std::move(series.front());
    run_series.group = "run" + std::to_string(r);
    write_year_series_csv({run_series},
                          joined(config.out_dir, "rewired_series_run" + std::to_string(r) + ".csv"));
    per_run[static_cast<std::size_t>(r)] = std::move(run_series);
  }
  YearSeries rewired_mean = mean_across_series(per_run, "rewired_mean");
  write_year_series_csv({rewired_mean}, joined(config.out_dir, "rewired_mean_series.csv"));
  write_gap_csv(gap_series(observed, rewired_mean), joined(config.out_dir, "gap.csv"));
}

void run_zscore(const RunConfig& config) {
  LoadResult loaded = load_input(config);
  CdConfig cd_config = resolved_cd(config, loaded.graph);
  ZScoreTable table = z_scores(loaded.graph, config.rewire, cd_config);
  ensure_out_dir(config.out_dir);
  write_zscore_csv(loaded.graph, table, joined(config.out_dir, "zscore.csv"));
  write_zscore_year_csv(table, joined(config.out_dir, "zscore_year.csv"));
}

void run_regress(const RunConfig& config) {
  LoadResult loaded = load_input(config);
  CdConfig cd_config = resolved_cd(config, loaded.graph);
  auto values = cd_all(loaded.graph, cd_config);
  ensure_out_dir(config.out_dir);

  DesignMatrix design = build_design(loaded.graph, values, config.regression);
  for (const auto& warning : design.warnings) note("warning", warning);
  if (design.excluded_no_field > 0)
    note("excluded_no_field", std::to_string(design.excluded_no_field));
  RegressionFit fit = fit_ols(design);
  for (const auto& dropped : fit.dropped_columns) note("dropped_column", dropped);
  note("adjusted_r2", format_double(fit.adjusted_r2));

  write_text(joined(config.out_dir, "fit_report.txt"), format_fit_report(fit));
  write_fit_csv(fit, joined(config.out_dir, "fit.csv"));
  write_rmse_csv(rmse_by_refcount(fit, loaded.graph, config.rmse_cap),
                 joined(config.out_dir, "rmse_by_refcount.csv"));
  write_adjusted_series_csv(adjusted_cd_series(fit), joined(config.out_dir, "adjusted_series.csv"));
  if (config.sweep_k_max > 0)
    write_sweep_csv(dummy_sweep(loaded.graph, values, config.sweep_k_max),
                    joined(config.out_dir, "dummy_sweep.csv"));
}

void run_hist(const RunConfig& config) {
  std::vector<double> values;
  if (!config.values_path.empty()) {
    values = values_from_csv(config.values_path);
  } else {
    LoadResult loaded = load_input(config);
    values = defined_values(cd_all(loaded.graph, resolved_cd(config, loaded.graph)));
  }
  Histogram hist = histogram(values, config.hist);
  note("dropped", std::to_string(hist.dropped));
  ensure_out_dir(config.out_dir);
  write_histogram_csv(hist, joined(config.out_dir, "hist.csv"));
}

void run_synth(const RunConfig& config) {
  SynthResult result = generate(config.synth);
  note("nodes", std::to_string(result.graph.n()));
  note("edges", std::to_string(result.graph.m()));
  ensure_out_dir(config.out_dir);
  write_nodes_csv(result.graph, joined(config.out_dir, "nodes.csv"));
  write_edges_csv(result.graph, joined(config.out_dir, "edges.csv"));
  write_truth_csv(result, joined(config.out_dir, "truth.csv"));
}

// cd -> filter -> histograms -> series, one directory.
void run_report(const RunConfig& config) {
  LoadResult loaded = load_input(config);
  CdConfig cd_config = resolved_cd(config, loaded.graph);
  auto values = cd_all(loaded.graph, cd_config);
  auto flags = flag(loaded.graph, values);
  ensure_out_dir(config.out_dir);

  write_per_node_csv(loaded.graph, values, joined(config.out_dir, "per_node.csv"));
  write_filtered_series(config, loaded.graph, values, flags);

  ShareReport share = share_zero_ref_within_cd_one(flags, loaded.graph);
  if (share.overall_available) note("share_zero_ref_within_cd1", format_double(share.overall));
  write_share_csv(share, joined(config.out_dir, "share_zero_ref_within_cd1.csv"));
  write_frequency_csv(relative_frequency_series(flags, loaded.graph),
                      joined(config.out_dir, "artefact_frequency.csv"));

  auto sample = defined_values(values);
  if (!sample.empty()) {
    HistogramSpec spec = config.hist;
    if (spec.bins == 0 && spec.binwidth == 0.0) spec.binwidth = 0.05;
    spec.mode = HistogramMode::Correct;
    write_histogram_csv(histogram(sample, spec), joined(config.out_dir, "hist_correct.csv"));
    spec.mode = HistogramMode::BinwidthBug;
    Histogram buggy = histogram(sample, spec);
    note("hist_bug_dropped", std::to_string(buggy.dropped));
    write_histogram_csv(buggy, joined(config.out_dir, "hist_bug.csv"));
  }
}

}  // namespace

void run(const RunConfig& config) {
  const std::string& cmd = config.subcommand;
  if (cmd == "ingest") return run_ingest(config);
  if (cmd == "cd") return run_cd(config);
  if (cmd == "filter") return run_filter(config);
  if (cmd == "rewire") return run_rewire(config);
  if (cmd == "zscore") return run_zscore(config);
  if (cmd == "regress") return run_regress(config);
  if (cmd == "hist") return run_hist(config);
  if (cmd == "synth") return run_synth(config);
  if (cmd == "report") return run_report(config);
  throw SchemaError("unknown subcommand: " + cmd);
}

}  // namespace disruptix
