#include <doctest.h>

#include "disruptix/artefact.hpp"
#include "disruptix/csv.hpp"
#include "disruptix/errors.hpp"
#include <map>

#include "disruptix/synthgen.hpp"
#include "support.hpp"

using namespace disruptix;
using namespace testsupport;

namespace {

SynthConfig small_config() {
  SynthConfig config;
  config.seed = 9;
  config.year_start = 2000;
  config.year_end = 2011;
  config.nodes_per_year = 150;
  config.ref_count_weights = SynthConfig::uniform_ref_weights(3, 8);
  return config;
}

}  // namespace

TEST_CASE("generation is reproducible") {
  SynthConfig config = small_config();
  SynthResult a = generate(config);
  SynthResult b = generate(config);
  CHECK(a.graph.n() == b.graph.n());
  CHECK(a.graph.edge_list() == b.graph.edge_list());
  CHECK(a.truth == b.truth);
  for (NodeId v = 0; v < a.graph.n(); ++v) {
    CHECK(a.graph.field(v) == b.graph.field(v));
    CHECK(a.graph.n_authors(v) == b.graph.n_authors(v));
  }
}

TEST_CASE("generated corpora pass temporal validation") {
  SynthResult result = generate(small_config());
  CHECK(validate_temporal(result.graph).count == 0);
}

TEST_CASE("artefact nodes have zero references and a defined maximal-window index of one") {
  SynthResult result = generate(small_config());
  CdConfig max_cfg{CdWindow::max(), DateKind::YearOnly};
  auto values = cd_all(result.graph, max_cfg);
  for (NodeId v = 0; v < result.graph.n(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    if (result.truth[i] != SynthClass::Artefact) continue;
    CHECK(result.graph.out_degree(v) == 0);
    CHECK(result.graph.in_degree(v) >= 1);
    CHECK(values[i].cd.defined);
    CHECK(values[i].cd.value == 1.0);
  }
}

TEST_CASE("under finite windows every flagged node is an artefact or first-year structural") {
  SynthResult result = generate(small_config());
  CdConfig cfg{CdWindow::fixed(5), DateKind::YearOnly};
  auto flags = flag(result.graph, cd_all(result.graph, cfg));
  for (NodeId v = 0; v < result.graph.n(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    if (flags.zero_ref[i] && flags.cd_eq_one[i])
      CHECK(result.truth[i] != SynthClass::Normal);
  }
}

TEST_CASE("an all-zero schedule produces no artefact nodes") {
  SynthConfig config = small_config();
  config.artefact_share_schedule.assign(12, 0.0);
  SynthResult result = generate(config);
  CdConfig cfg{CdWindow::fixed(5), DateKind::YearOnly};
  auto flags = flag(result.graph, cd_all(result.graph, cfg));
  for (NodeId v = 0; v < result.graph.n(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    CHECK(result.truth[i] != SynthClass::Artefact);
    // anything flagged is a first-year node without eligible targets
    if (flags.zero_ref[i] && flags.cd_eq_one[i]) {
      CHECK(result.truth[i] == SynthClass::Structural);
      CHECK(result.graph.year(v) == config.year_start);
    }
  }
}

TEST_CASE("constant schedule: measured share tracks the realized truth share") {
  SynthConfig config = small_config();
  config.nodes_per_year = 400;
  config.artefact_share_schedule.assign(12, 0.2);
  SynthResult result = generate(config);
  CdConfig cfg{CdWindow::fixed(5), DateKind::YearOnly};
  auto flags = flag(result.graph, cd_all(result.graph, cfg));

  // binomial 3-sigma envelope around the nominal share per year
  double sigma = std::sqrt(0.2 * 0.8 / 400.0);
  std::map<std::int32_t, std::pair<std::int64_t, std::int64_t>> per_year;  // artefact, total
  for (NodeId v = 0; v < result.graph.n(); ++v) {
    auto& slot = per_year[result.graph.year(v)];
    if (result.truth[static_cast<std::size_t>(v)] == SynthClass::Artefact) ++slot.first;
    ++slot.second;
  }
  for (const auto& [year, slot] : per_year) {
    if (year == config.year_start) continue;  // structural nodes muddy the first cohort
    double realized = static_cast<double>(slot.first) / static_cast<double>(slot.second);
    CHECK(std::abs(realized - 0.2) < 3.0 * sigma);
  }

  // the flag-based share over CD=1 nodes equals a truth-table recount
  auto report = share_zero_ref_within_cd_one(flags, result.graph);
  for (const auto& row : report.per_year) {
    if (!row.available || row.year == config.year_start) continue;
    std::int64_t flagged = 0, cd1 = 0;
    for (NodeId v = 0; v < result.graph.n(); ++v) {
      if (result.graph.year(v) != row.year) continue;
      const auto i = static_cast<std::size_t>(v);
      if (flags.cd_eq_one[i]) {
        ++cd1;
        if (flags.zero_ref[i]) ++flagged;
      }
    }
    CHECK(row.n_cd_one == cd1);
    CHECK(row.n_zero_ref == flagged);
  }
}

TEST_CASE("declining schedule appears in the relative frequency series") {
  SynthConfig config = small_config();
  config.year_end = 2017;  // 18 cohorts, 12 with complete windows
  config.nodes_per_year = 300;
  config.artefact_share_schedule.clear();
  for (int i = 0; i < 18; ++i)
    config.artefact_share_schedule.push_back(0.30 - 0.0147 * static_cast<double>(i));
  SynthResult result = generate(config);
  CdConfig cfg{CdWindow::fixed(5), DateKind::YearOnly};
  auto flags = flag(result.graph, cd_all(result.graph, cfg));
  auto rows = relative_frequency_series(flags, result.graph);

  std::vector<std::pair<double, double>> points;
  for (const auto& row : rows) {
    if (!row.available || row.year == config.year_start) continue;
    if (row.year > config.year_end - 5) continue;  // incomplete windows thin the defined pool
    points.emplace_back(static_cast<double>(row.year), row.share);
  }
  REQUIRE(points.size() >= 5);
  SlopeFit fit = fit_slope(points);
  CHECK(fit.slope < 0.0);
  CHECK(fit.t < -3.0);
}

TEST_CASE("preferential attachment concentrates citations and stays valid") {
  SynthConfig config = small_config();
  config.attachment = Attachment::PreferentialPast;
  SynthResult result = generate(config);
  CHECK(validate_temporal(result.graph).count == 0);
  SynthResult again = generate(config);
  CHECK(result.graph.edge_list() == again.graph.edge_list());

  // heavier right tail than the uniform rule: compare maximum in-degrees
  SynthConfig uniform_config = small_config();
  SynthResult uniform_result = generate(uniform_config);
  std::int32_t pref_max = 0, uni_max = 0;
  for (NodeId v = 0; v < result.graph.n(); ++v) pref_max = std::max(pref_max, result.graph.in_degree(v));
  for (NodeId v = 0; v < uniform_result.graph.n(); ++v)
    uni_max = std::max(uni_max, uniform_result.graph.in_degree(v));
  CHECK(pref_max > uni_max);
}

TEST_CASE("single-year corpora cannot host artefacts") {
  SynthConfig config;
  config.year_start = 2000;
  config.year_end = 2000;
  config.nodes_per_year = 50;
  config.artefact_share_schedule = {1.0};
  CHECK_THROWS_AS(generate(config), SchemaError);
}

TEST_CASE("truth table export") {
  TempDir tmp("truth");
  SynthResult result = generate(small_config());
  write_truth_csv(result, tmp.file("truth.csv"));
  auto table = read_csv(tmp.file("truth.csv"));
  CHECK(table.header == std::vector<std::string>{"id", "class"});
  CHECK(table.rows.size() == static_cast<std::size_t>(result.graph.n()));
  std::int64_t artefacts = 0;
  for (const auto& row : table.rows)
    if (row[1] == "artefact") ++artefacts;
  std::int64_t truth_artefacts = 0;
  for (auto c : result.truth)
    if (c == SynthClass::Artefact) ++truth_artefacts;
  CHECK(artefacts == truth_artefacts);
}
