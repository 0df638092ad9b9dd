#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "disruptix/errors.hpp"
#include "disruptix/runner.hpp"

namespace {

using namespace disruptix;

CdWindow parse_window(const std::string& text) {
  if (text == "max") return CdWindow::max();
  try {
    int t = std::stoi(text);
    if (t >= 1) return CdWindow::fixed(t);
  } catch (...) {
  }
  throw CLI::ValidationError("--window", "expected a positive year count or 'max'");
}

ExclusionPolicy parse_policy(const std::string& text) {
  if (text == "none") return ExclusionPolicy::None;
  if (text == "cd1") return ExclusionPolicy::DropCdOne;
  if (text == "zeroref") return ExclusionPolicy::DropZeroRef;
  if (text == "zeroref-cd1") return ExclusionPolicy::DropZeroRefCdOne;
  throw CLI::ValidationError("--exclude", "expected none|cd1|zeroref|zeroref-cd1");
}

std::vector<FieldMix> parse_fields(const std::string& text) {
  // label:weight pairs, comma separated; "none" disables labels
  std::vector<FieldMix> out;
  if (text == "none") return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    std::string item = text.substr(start, end == std::string::npos ? end : end - start);
    std::size_t colon = item.find(':');
    FieldMix mix;
    mix.label = colon == std::string::npos ? item : item.substr(0, colon);
    mix.weight = colon == std::string::npos ? 1.0 : std::stod(item.substr(colon + 1));
    if (mix.label.empty() || mix.weight <= 0.0)
      throw CLI::ValidationError("--fields", "expected label:weight,label:weight,...");
    out.push_back(std::move(mix));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

void add_input_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--nodes", config.nodes_path, "node file (id,date[,field][,n_authors])")
      ->required();
  cmd->add_option("--edges", config.edges_path, "edge file (citer,cited)")->required();
  cmd->add_flag_callback(
      "--tab", [&config] { config.schema.delimiter = '\t'; }, "tab-delimited input");
  cmd->add_option_function<std::string>(
      "--resolution",
      [&config](const std::string& text) {
        if (text == "date") config.schema.resolution = DateKind::FullDate;
        else if (text == "year") config.schema.resolution = DateKind::YearOnly;
        else throw CLI::ValidationError("--resolution", "expected date|year");
      },
      "pin the date resolution (default: detect)");
}

void add_cd_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option_function<std::string>(
      "--window",
      [&config](const std::string& text) { config.cd.window = parse_window(text); },
      "forward citation window in years, or 'max' (default 5)");
  cmd->add_option_function<std::string>(
      "--normalize",
      [&config](const std::string& text) {
        if (text == "raw") config.cd.normalization = Normalization::Raw;
        else if (text == "entity") config.cd.normalization = Normalization::Entity;
        else if (text == "fieldyear") config.cd.normalization = Normalization::FieldYear;
        else throw CLI::ValidationError("--normalize", "expected raw|entity|fieldyear");
      },
      "N_R adjustment (default raw)");
  cmd->add_flag("--by-field", config.by_field, "also group yearly series by field");
}

void add_hist_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option_function<std::string>(
      "--hist-mode",
      [&config](const std::string& text) {
        if (text == "correct") config.hist.mode = HistogramMode::Correct;
        else if (text == "bug") config.hist.mode = HistogramMode::BinwidthBug;
        else throw CLI::ValidationError("--hist-mode", "expected correct|bug");
      },
      "histogram edge construction (default correct)");
  cmd->add_option("--bins", config.hist.bins, "number of equal-width bins");
  cmd->add_option("--binwidth", config.hist.binwidth, "bin width over the range");
  cmd->add_option("--hist-lo", config.hist.lo, "range minimum (default -1)");
  cmd->add_option("--hist-hi", config.hist.hi, "range maximum (default 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"disruption index toolkit for temporal citation networks"};
  app.require_subcommand(1);

  RunConfig config;
  std::uint64_t seed = 0;
  bool seed_given = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", config.out_dir, "output directory (default ./out)");
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&](std::uint64_t s) {
          seed = s;
          seed_given = true;
        },
        "seed for randomized subcommands");
  };

  auto* ingest = app.add_subcommand("ingest", "validate a corpus and export it canonically");
  add_input_flags(ingest, config);
  add_common(ingest);

  auto* cd_cmd = app.add_subcommand("cd", "per-node CD values and yearly mean series");
  add_input_flags(cd_cmd, config);
  add_cd_flags(cd_cmd, config);
  add_common(cd_cmd);

  auto* filter = app.add_subcommand("filter", "artefact shares, frequencies, filtered series");
  add_input_flags(filter, config);
  add_cd_flags(filter, config);
  filter->add_option_function<std::string>(
      "--exclude",
      [&config](const std::string& text) { config.policy = parse_policy(text); },
      "exclusion policy (default zeroref-cd1)");
  add_common(filter);

  auto* rewire_cmd = app.add_subcommand("rewire", "degree- and year-preserving null model runs");
  add_input_flags(rewire_cmd, config);
  add_cd_flags(rewire_cmd, config);
  rewire_cmd->add_option("--runs", config.rewire.runs, "rewired replicates (default 10)");
  rewire_cmd->add_option("--retained-mult", config.rewire.retained_multiplier,
                         "retained swaps per edge (default 100)");
  rewire_cmd->add_option("--attempt-mult", config.rewire.max_attempts_multiplier,
                         "proposal budget per edge (default 10000)");
  add_common(rewire_cmd);

  auto* zscore = app.add_subcommand("zscore", "per-node z-scores against rewired replicates");
  add_input_flags(zscore, config);
  add_cd_flags(zscore, config);
  zscore->add_option("--runs", config.rewire.runs, "rewired replicates (default 10)");
  add_common(zscore);

  auto* regress = app.add_subcommand("regress", "fixed-effects adjustment regression");
  add_input_flags(regress, config);
  add_cd_flags(regress, config);
  regress->add_flag("--dummy", config.regression.include_zero_ref_dummy,
                    "include the zero-references dummy");
  regress->add_option_function<std::int32_t>(
      "--dummy-at",
      [&config](std::int32_t k) { config.regression.dummy_at_refcount = k; },
      "include a references==k dummy instead");
  regress->add_option("--dummy-sweep", config.sweep_k_max,
                      "also sweep refcount dummies for k=0..K");
  regress->add_option("--rmse-cap", config.rmse_cap,
                      "pool reference counts above this into one bucket (default 100)");
  add_common(regress);

  auto* hist = app.add_subcommand("hist", "CD histogram, correct or binwidth-bug emulation");
  hist->add_option("--values", config.values_path, "per-node CSV to read values from");
  hist->add_option("--nodes", config.nodes_path, "node file (when computing values)");
  hist->add_option("--edges", config.edges_path, "edge file (when computing values)");
  hist->add_flag_callback(
      "--tab", [&config] { config.schema.delimiter = '\t'; }, "tab-delimited input");
  add_cd_flags(hist, config);
  add_hist_flags(hist, config);
  add_common(hist);

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with a truth table");
  synth->add_option("--year-start", config.synth.year_start, "first year (default 2000)");
  synth->add_option("--year-end", config.synth.year_end, "last year (default 2029)");
  synth->add_option("--nodes-per-year", config.synth.nodes_per_year, "cohort size (default 500)");
  double share_start = 0.30, share_end = 0.05;
  synth->add_option("--share-start", share_start, "artefact share, first year (default 0.30)");
  synth->add_option("--share-end", share_end, "artefact share, last year (default 0.05)");
  std::int32_t ref_min = 20, ref_max = 40;
  synth->add_option("--ref-min", ref_min, "minimum references of a normal node (default 20)");
  synth->add_option("--ref-max", ref_max, "maximum references of a normal node (default 40)");
  synth->add_option_function<std::string>(
      "--attachment",
      [&config](const std::string& text) {
        if (text == "uniform") config.synth.attachment = Attachment::UniformPast;
        else if (text == "preferential") config.synth.attachment = Attachment::PreferentialPast;
        else throw CLI::ValidationError("--attachment", "expected uniform|preferential");
      },
      "citation target rule (default uniform)");
  synth->add_option("--recency", config.synth.recency_years,
                    "citation pool horizon in years, 0 = unbounded (default 5)");
  synth->add_option_function<std::string>(
      "--fields",
      [&config](const std::string& text) { config.synth.fields = parse_fields(text); },
      "field mix label:weight,... or 'none' (default f1:0.6,f2:0.4)");
  synth->add_option("--max-authors", config.synth.max_authors,
                    "author counts uniform on 1..max, 0 = omit (default 5)");
  add_common(synth);

  auto* report = app.add_subcommand("report", "cd + filter + histograms in one directory");
  add_input_flags(report, config);
  add_cd_flags(report, config);
  report->add_option_function<std::string>(
      "--exclude",
      [&config](const std::string& text) { config.policy = parse_policy(text); },
      "exclusion policy for the filtered series (default zeroref-cd1)");
  add_hist_flags(report, config);
  add_common(report);

  CLI11_PARSE(app, argc, argv);

  config.subcommand = app.get_subcommands().front()->get_name();
  if (seed_given) {
    config.rewire.seed = seed;
    config.synth.seed = seed;
  }
  if (config.subcommand == "synth") {
    std::int32_t n_years = config.synth.year_end - config.synth.year_start + 1;
    if (n_years >= 1) {
      config.synth.artefact_share_schedule.resize(static_cast<std::size_t>(n_years));
      for (std::int32_t i = 0; i < n_years; ++i) {
        double f = n_years == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n_years - 1);
        config.synth.artefact_share_schedule[static_cast<std::size_t>(i)] =
            share_start + f * (share_end - share_start);
      }
    }
    if (ref_min < 1 || ref_max < ref_min) {
      std::cerr << "disruptix: schema: --ref-min/--ref-max must satisfy 1 <= min <= max\n";
      return 3;
    }
    config.synth.ref_count_weights = SynthConfig::uniform_ref_weights(ref_min, ref_max);
  }

  try {
    disruptix::run(config);
  } catch (const IoError& e) {
    std::cerr << "disruptix: io: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "disruptix: schema: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "disruptix: numeric: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "disruptix: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
