#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "disruptix/errors.hpp"
#include "disruptix/regression.hpp"
#include "support.hpp"

using namespace disruptix;
using namespace testsupport;

namespace {

// 2 years x 2 fields, defined responses everywhere, authors present.
CitationGraph tiny_panel() {
  return make_graph({{"r1", "1995", "", 1},
                     {"a", "2000", "x", 2},
                     {"b", "2000", "y", 1},
                     {"c", "2001", "x", 3},
                     {"d", "2001", "y", 2}},
                    {{"a", "r1"}, {"c", "r1"}, {"d", "r1"}});
}

std::vector<NodeCd> constant_values(const CitationGraph& g, double level) {
  std::vector<NodeCd> values(static_cast<std::size_t>(g.n()));
  for (NodeId v = 0; v < g.n(); ++v) {
    if (g.has_field(v)) values[static_cast<std::size_t>(v)].cd = CdValue::of(level);
  }
  return values;
}

}  // namespace

TEST_CASE("design matrix column layout") {
  auto g = tiny_panel();
  auto values = constant_values(g, 0.25);

  SUBCASE("two years and two fields without a dummy: seven columns") {
    DesignMatrix design = build_design(g, values, RegressionSpec{});
    CHECK(design.cols() == 7);
    CHECK(design.column_names ==
          std::vector<std::string>{"intercept", "year=2001", "field=y", "n_refs",
                                   "cell_n_entities", "cell_mean_refs", "cell_mean_authors"});
    CHECK(design.rows() == 4);           // r1 lacks a field
    CHECK(design.excluded_no_field == 0);  // r1's response is undefined, not field-dropped
    CHECK(design.reference_year == 2000);
    CHECK(design.reference_field == "x");
  }
  SUBCASE("the zero-reference dummy adds one column") {
    RegressionSpec spec;
    spec.include_zero_ref_dummy = true;
    DesignMatrix design = build_design(g, values, spec);
    CHECK(design.cols() == 8);
    CHECK(design.column_names.back() == "zero_refs");
  }
  SUBCASE("dummy variants are mutually exclusive") {
    RegressionSpec spec;
    spec.include_zero_ref_dummy = true;
    spec.dummy_at_refcount = 3;
    CHECK_THROWS_AS(build_design(g, values, spec), SchemaError);
  }
  SUBCASE("defined but unlabeled nodes are excluded with a count") {
    auto values2 = values;
    values2[static_cast<std::size_t>(g.id_of("r1"))].cd = CdValue::of(0.1);
    DesignMatrix design = build_design(g, values2, RegressionSpec{});
    CHECK(design.rows() == 4);
    CHECK(design.excluded_no_field == 1);
  }
}

TEST_CASE("cell controls are means over the estimation sample") {
  // field f, year 2000 holds refs {0, 4} -> cell_mean_refs 2
  auto g = make_graph({{"t1", "1990", "", -1},
                       {"t2", "1990", "", -1},
                       {"t3", "1990", "", -1},
                       {"t4", "1990", "", -1},
                       {"a", "2000", "f", 2},
                       {"b", "2000", "f", 4}},
                      {{"b", "t1"}, {"b", "t2"}, {"b", "t3"}, {"b", "t4"}});
  auto values = constant_values(g, 0.5);
  DesignMatrix design = build_design(g, values, RegressionSpec{});
  auto it = std::find(design.column_names.begin(), design.column_names.end(), "cell_mean_refs");
  REQUIRE(it != design.column_names.end());
  const auto& col = design.columns[static_cast<std::size_t>(it - design.column_names.begin())];
  for (double x : col) CHECK(x == doctest::Approx(2.0));
  auto it2 = std::find(design.column_names.begin(), design.column_names.end(), "cell_mean_authors");
  const auto& col2 = design.columns[static_cast<std::size_t>(it2 - design.column_names.begin())];
  for (double x : col2) CHECK(x == doctest::Approx(3.0));
}

TEST_CASE("missing author counts drop the control with a warning") {
  auto g = make_graph({{"a", "2000", "x"}, {"b", "2000", "y"}, {"c", "2001", "x"}}, {});
  auto values = constant_values(g, 0.25);
  DesignMatrix design = build_design(g, values, RegressionSpec{});
  CHECK(std::find(design.column_names.begin(), design.column_names.end(), "cell_mean_authors") ==
        design.column_names.end());
  REQUIRE(design.warnings.size() == 1);
  CHECK(design.warnings[0].find("author") != std::string::npos);
}

TEST_CASE("constant response collapses to the intercept") {
  DiscontinuityCorpus corpus = make_discontinuity_corpus(5, false, 4, 2, 6);
  for (auto& v : corpus.values)
    if (v.cd.defined) v.cd = CdValue::of(0.37);
  RegressionFit fit = fit_ols(build_design(corpus.graph, corpus.values, RegressionSpec{}));
  CHECK(fit.r2 == doctest::Approx(0.0));
  for (const auto& coef : fit.coefficients) {
    if (coef.name == "intercept" || coef.dropped) continue;
    CHECK(coef.estimate == doctest::Approx(0.0).epsilon(1e-9));
  }
  CHECK(fit.find("intercept")->estimate == doctest::Approx(0.37));
}

TEST_CASE("discontinuity corpus: the dummy absorbs the zero-reference jump") {
  DiscontinuityCorpus corpus = make_discontinuity_corpus(17, true);

  RegressionFit plain = fit_ols(build_design(corpus.graph, corpus.values, RegressionSpec{}));
  RegressionSpec with_dummy;
  with_dummy.include_zero_ref_dummy = true;
  RegressionFit dummied = fit_ols(build_design(corpus.graph, corpus.values, with_dummy));

  CHECK(dummied.adjusted_r2 > 0.95);
  CHECK(dummied.adjusted_r2 - plain.adjusted_r2 > 0.3);
  CHECK(dummied.r2 >= plain.r2);  // adding a column never loses fit

  // construction truth: jump of 0.7 at zero references, slope -0.005
  const Coefficient* zeta = dummied.find("zero_refs");
  REQUIRE(zeta != nullptr);
  CHECK_FALSE(zeta->dropped);
  CHECK(std::abs(zeta->estimate - 0.7) < 3.0 * zeta->se);
  const Coefficient* beta = dummied.find("n_refs");
  REQUIRE(beta != nullptr);
  CHECK(std::abs(beta->estimate + 0.005) < 3.0 * beta->se);

  SUBCASE("residual error concentrates at zero references only without the dummy") {
    RmseByRefcount no_dummy = rmse_by_refcount(plain, corpus.graph);
    RmseByRefcount with = rmse_by_refcount(dummied, corpus.graph);
    REQUIRE(no_dummy.buckets.count(0) == 1);
    double at_zero = no_dummy.buckets.at(0).rmse;
    std::vector<double> others;
    for (std::int32_t k = 1; k <= 20; ++k) {
      REQUIRE(no_dummy.buckets.count(k) == 1);
      CHECK(at_zero > no_dummy.buckets.at(k).rmse);
      others.push_back(with.buckets.at(k).rmse);
    }
    std::sort(others.begin(), others.end());
    double median = others[others.size() / 2];
    CHECK(with.buckets.at(0).rmse < 2.0 * median);
    // the dummy strictly improves the zero-reference fit
    CHECK(with.buckets.at(0).rmse < at_zero);
  }

  SUBCASE("dummy sweep singles out k = 0") {
    auto sweep = dummy_sweep(corpus.graph, corpus.values, 10);
    REQUIRE(sweep.size() == 11);
    CHECK(sweep[0].k == 0);
    for (std::size_t i = 1; i < sweep.size(); ++i)
      CHECK(sweep[0].adjusted_r2 - sweep[i].adjusted_r2 > 0.2);
    // k = 0 is the same design as the zero-reference dummy
    CHECK(sweep[0].adjusted_r2 == doctest::Approx(dummied.adjusted_r2).epsilon(1e-12));
  }
}

TEST_CASE("smooth corpus: the sweep is flat") {
  DiscontinuityCorpus corpus = make_discontinuity_corpus(23, false);
  auto sweep = dummy_sweep(corpus.graph, corpus.values, 10);
  double lo = 1.0, hi = 0.0;
  for (const auto& row : sweep) {
    lo = std::min(lo, row.adjusted_r2);
    hi = std::max(hi, row.adjusted_r2);
  }
  CHECK(hi - lo < 0.05);
}

TEST_CASE("adjusted series exposes year effects around the intercept") {
  DiscontinuityCorpus corpus = make_discontinuity_corpus(31, true);
  RegressionSpec spec;
  spec.include_zero_ref_dummy = true;
  RegressionFit fit = fit_ols(build_design(corpus.graph, corpus.values, spec));
  auto series = adjusted_cd_series(fit);
  REQUIRE(series.size() == 10);  // one row per year including the reference

  const Coefficient* intercept = fit.find("intercept");
  bool saw_reference = false;
  for (const auto& row : series) {
    if (row.year == fit.reference_year) {
      saw_reference = true;
      CHECK(row.value == intercept->estimate);
      CHECK(row.se == 0.0);
    }
    // responses carry no year signal by construction
    CHECK(std::abs(row.value - intercept->estimate) < 0.01);
  }
  CHECK(saw_reference);
  CHECK(std::is_sorted(series.begin(), series.end(),
                       [](const auto& a, const auto& b) { return a.year < b.year; }));
}

TEST_CASE("residual orthogonality and finite-difference gradient at the solution") {
  DiscontinuityCorpus corpus = make_discontinuity_corpus(47, true, 6, 3, 12);
  RegressionSpec spec;
  spec.include_zero_ref_dummy = true;
  DesignMatrix design = build_design(corpus.graph, corpus.values, spec);
  RegressionFit fit = fit_ols(design);

  double x_scale = 0.0, r_scale = 0.0;
  for (const auto& col : design.columns)
    for (double x : col) x_scale = std::max(x_scale, std::abs(x));
  for (double r : fit.residuals) r_scale = std::max(r_scale, std::abs(r));

  // X^T r vanishes for kept columns
  std::vector<double> beta(static_cast<std::size_t>(design.cols()));
  for (std::int64_t j = 0; j < design.cols(); ++j) {
    beta[static_cast<std::size_t>(j)] = fit.coefficients[static_cast<std::size_t>(j)].estimate;
    if (fit.coefficients[static_cast<std::size_t>(j)].dropped) continue;
    double dot = 0.0;
    for (std::int64_t i = 0; i < design.rows(); ++i)
      dot += design.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] *
             fit.residuals[static_cast<std::size_t>(i)];
    CHECK(std::abs(dot) / (x_scale * r_scale * static_cast<double>(design.rows())) < 1e-8);
  }

  // central finite differences of the squared loss agree with -2 X^T r
  auto loss = [&](const std::vector<double>& b) {
    double total = 0.0;
    for (std::int64_t i = 0; i < design.rows(); ++i) {
      double pred = 0.0;
      for (std::int64_t j = 0; j < design.cols(); ++j)
        pred += design.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] *
                b[static_cast<std::size_t>(j)];
      double e = design.response[static_cast<std::size_t>(i)] - pred;
      total += e * e;
    }
    return total;
  };
  const double h = 1e-6;
  double scale = 1.0 + loss(beta);
  for (std::int64_t j = 0; j < design.cols(); ++j) {
    if (fit.coefficients[static_cast<std::size_t>(j)].dropped) continue;
    auto hi = beta, lo = beta;
    hi[static_cast<std::size_t>(j)] += h;
    lo[static_cast<std::size_t>(j)] -= h;
    double fd = (loss(hi) - loss(lo)) / (2.0 * h);
    CHECK(std::abs(fd) / scale < 1e-4);
  }
}

TEST_CASE("linearly dependent columns are dropped deterministically") {
  // every cell has identical composition, so the cell controls are
  // constants and collapse into the intercept
  DiscontinuityCorpus corpus = make_discontinuity_corpus(53, true, 4, 2, 8);
  RegressionFit fit = fit_ols(build_design(corpus.graph, corpus.values, RegressionSpec{}));
  bool entities_dropped = false;
  for (const auto& name : fit.dropped_columns)
    if (name == "cell_n_entities") entities_dropped = true;
  CHECK(entities_dropped);
  const Coefficient* coef = fit.find("cell_n_entities");
  REQUIRE(coef != nullptr);
  CHECK(coef->dropped);
  CHECK(coef->estimate == 0.0);
  // earlier columns keep their estimates
  CHECK_FALSE(fit.find("intercept")->dropped);
  CHECK_FALSE(fit.find("n_refs")->dropped);
}

TEST_CASE("more columns than rows is an error") {
  auto g = tiny_panel();
  auto values = constant_values(g, 0.1);
  CHECK_THROWS_AS(fit_ols(build_design(g, values, RegressionSpec{})), NumericError);
}

TEST_CASE("two-sided t-test p-values") {
  CHECK(student_t_two_sided_p(0.0, 10.0) == doctest::Approx(1.0));
  CHECK(student_t_two_sided_p(2.0, 10.0) == doctest::Approx(0.07339).epsilon(1e-3));
  CHECK(student_t_two_sided_p(-2.0, 10.0) == doctest::Approx(0.07339).epsilon(1e-3));
  CHECK(student_t_two_sided_p(1.96, 1e7) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(student_t_two_sided_p(12.0, 30.0) < 1e-10);
}

TEST_CASE("report formatting carries stars and the adjusted fit") {
  DiscontinuityCorpus corpus = make_discontinuity_corpus(61, true, 4, 3, 8);
  RegressionSpec spec;
  spec.include_zero_ref_dummy = true;
  RegressionFit fit = fit_ols(build_design(corpus.graph, corpus.values, spec));
  std::string report = format_fit_report(fit);
  CHECK(report.find("zero_refs") != std::string::npos);
  CHECK(report.find("Adjusted R^2") != std::string::npos);
  CHECK(report.find("***") != std::string::npos);
}
