#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "disruptix/cd_index.hpp"
#include "disruptix/graph.hpp"

namespace disruptix {

// Fixed-effects OLS layout: intercept, year dummies (first year is the
// reference), field dummies (first label is the reference), the node's
// reference count, three (field, year) cell controls, and optionally one
// discontinuity dummy (zero references, or exactly k references for the
// sweep variant).
struct RegressionSpec {
  bool include_zero_ref_dummy = false;
  std::optional<std::int32_t> dummy_at_refcount;  // mutually exclusive with the above
};

struct DesignMatrix {
  std::vector<std::string> column_names;  // [0] = intercept
  std::vector<std::vector<double>> columns;
  std::vector<double> response;
  std::vector<NodeId> row_nodes;
  std::int64_t excluded_no_field = 0;    // defined CD but unlabeled
  std::vector<std::string> warnings;     // e.g. dropped author control
  std::int32_t reference_year = 0;
  std::string reference_field;

  std::int64_t rows() const { return static_cast<std::int64_t>(response.size()); }
  std::int64_t cols() const { return static_cast<std::int64_t>(columns.size()); }
};

// Observations are nodes with a defined CD value and a field label,
// ordered by id. Cell controls (entity count, mean references, mean
// authors) are computed over the estimation sample; the author control is
// dropped with a warning when any included node lacks a count.
DesignMatrix build_design(const CitationGraph& graph, const std::vector<NodeCd>& values,
                          const RegressionSpec& spec);

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double t = 0.0;
  double p = 1.0;
  bool dropped = false;  // removed as linearly dependent
};

struct RegressionFit {
  std::vector<Coefficient> coefficients;  // design order
  std::int64_t n = 0;
  std::int64_t rank = 0;       // kept columns
  double r2 = 0.0;
  double adjusted_r2 = 0.0;    // 1 - (1-R^2)(n-1)/(n-p-1), p = kept non-intercept
  double sigma2 = 0.0;         // residual variance, SSR / (n - rank)
  std::vector<double> residuals;
  std::vector<NodeId> row_nodes;
  std::vector<std::string> dropped_columns;
  std::int32_t reference_year = 0;
  std::string reference_field;

  const Coefficient* find(const std::string& name) const;
};

// Householder QR without pivoting. Columns whose remaining norm collapses
// are linearly dependent on earlier ones; they are dropped in column
// order, reported, and given a zero coefficient.
RegressionFit fit_ols(const DesignMatrix& design);

struct RmseBucket {
  std::int64_t count = 0;
  double rmse = 0.0;
};

struct RmseByRefcount {
  std::map<std::int32_t, RmseBucket> buckets;  // exact reference counts 0..cap
  std::int32_t cap = 100;
  RmseBucket tail;  // counts above cap, pooled
};

RmseByRefcount rmse_by_refcount(const RegressionFit& fit, const CitationGraph& graph,
                                std::int32_t cap = 100);

struct SweepRow {
  std::int32_t k = 0;
  double adjusted_r2 = 0.0;
};

// Adjusted R^2 of the fit with a references==k dummy, for k = 0..k_max.
std::vector<SweepRow> dummy_sweep(const CitationGraph& graph, const std::vector<NodeCd>& values,
                                  std::int32_t k_max);

struct AdjustedYearRow {
  std::int32_t year = 0;
  double value = 0.0;  // intercept + year effect (reference year: intercept)
  double se = 0.0;     // 0 for the reference year
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Year fixed effects as a series: the regression-adjusted yearly level
// with +-1.96 se bands.
std::vector<AdjustedYearRow> adjusted_cd_series(const RegressionFit& fit);

// Plain-text estimates table: one row per coefficient with significance
// stars from two-sided t-tests (*** p<0.01, ** p<0.05, * p<0.1), then N
// and adjusted R^2.
std::string format_fit_report(const RegressionFit& fit);

// CSV: name,estimate,se,t,p,stars,dropped.
void write_fit_csv(const RegressionFit& fit, const std::string& path);

// CSV: refcount,n,rmse with a final "<cap>+" tail row when populated.
void write_rmse_csv(const RmseByRefcount& table, const std::string& path);

// CSV: k,adjusted_r2.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

// CSV: year,value,se,ci_low,ci_high.
void write_adjusted_series_csv(const std::vector<AdjustedYearRow>& rows, const std::string& path);

// Two-sided p-value of a t statistic with nu degrees of freedom.
double student_t_two_sided_p(double t, double nu);

}  // namespace disruptix
