#include "disruptix/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "disruptix/csv.hpp"
#include "disruptix/errors.hpp"

namespace disruptix {

namespace {

// Regularized incomplete beta via the standard continued fraction
// (Lentz's method), good to ~1e-14 for the arguments a t-test produces.
double betacf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double eps = 1e-15;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                    b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

std::string stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

}  // namespace

double student_t_two_sided_p(double t, double nu) {
  if (nu <= 0.0) return 1.0;
  double x = nu / (nu + t * t);
  return reg_inc_beta(nu / 2.0, 0.5, x);
}

DesignMatrix build_design(const CitationGraph& graph, const std::vector<NodeCd>& values,
                          const RegressionSpec& spec) {
  if (spec.include_zero_ref_dummy && spec.dummy_at_refcount)
    throw SchemaError("regression: zero-reference dummy and refcount dummy are exclusive");
  if (values.size() != static_cast<std::size_t>(graph.n()))
    throw SchemaError("regression: values were not computed on this graph");

  DesignMatrix design;
  bool authors_ok = true;
  for (NodeId v = 0; v < graph.n(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    if (!values[i].cd.defined) continue;
    if (!graph.has_field(v)) {
      ++design.excluded_no_field;
      continue;
    }
    design.row_nodes.push_back(v);
    design.response.push_back(values[i].cd.value);
    if (!graph.has_authors(v)) authors_ok = false;
  }
  const std::int64_t n = design.rows();
  if (n == 0) throw SchemaError("regression: no usable observations");

  std::set<std::int32_t> year_set;
  std::set<std::string> field_set;
  for (NodeId v : design.row_nodes) {
    year_set.insert(graph.year(v));
    field_set.insert(graph.field(v));
  }
  design.reference_year = *year_set.begin();
  design.reference_field = *field_set.begin();

  // Cell controls over the estimation sample.
  struct Cell {
    std::int64_t count = 0;
    std::int64_t refs = 0;
    std::int64_t authors = 0;
  };
  std::map<std::pair<std::string, std::int32_t>, Cell> cells;
  for (NodeId v : design.row_nodes) {
    Cell& cell = cells[{graph.field(v), graph.year(v)}];
    ++cell.count;
    cell.refs += graph.out_degree(v);
    if (authors_ok) cell.authors += graph.n_authors(v);
  }

  auto add_column = [&](std::string name) -> std::vector<double>& {
    design.column_names.push_back(std::move(name));
    design.columns.emplace_back(static_cast<std::size_t>(n), 0.0);
    return design.columns.back();
  };

  {
    auto& col = add_column("intercept");
    std::fill(col.begin(), col.end(), 1.0);
  }
  for (std::int32_t year : year_set) {
    if (year == design.reference_year) continue;
    auto& col = add_column("year=" + std::to_string(year));
    for (std::int64_t r = 0; r < n; ++r)
      if (graph.year(design.row_nodes[static_cast<std::size_t>(r)]) == year)
        col[static_cast<std::size_t>(r)] = 1.0;
  }
  for (const std::string& field : field_set) {
    if (field == design.reference_field) continue;
    auto& col = add_column("field=" + field);
    for (std::int64_t r = 0; r < n; ++r)
      if (graph.field(design.row_nodes[static_cast<std::size_t>(r)]) == field)
        col[static_cast<std::size_t>(r)] = 1.0;
  }
  {
    auto& col = add_column("n_refs");
    for (std::int64_t r = 0; r < n; ++r)
      col[static_cast<std::size_t>(r)] =
          static_cast<double>(graph.out_degree(design.row_nodes[static_cast<std::size_t>(r)]));
  }
  {
    auto& entities = add_column("cell_n_entities");
    auto& mean_refs = add_column("cell_mean_refs");
    for (std::int64_t r = 0; r < n; ++r) {
      NodeId v = design.row_nodes[static_cast<std::size_t>(r)];
      const Cell& cell = cells[{graph.field(v), graph.year(v)}];
      entities[static_cast<std::size_t>(r)] = static_cast<double>(cell.count);
      mean_refs[static_cast<std::size_t>(r)] =
          static_cast<double>(cell.refs) / static_cast<double>(cell.count);
    }
  }
  if (authors_ok) {
    auto& col = add_column("cell_mean_authors");
    for (std::int64_t r = 0; r < n; ++r) {
      NodeId v = design.row_nodes[static_cast<std::size_t>(r)];
      const Cell& cell = cells[{graph.field(v), graph.year(v)}];
      col[static_cast<std::size_t>(r)] =
          static_cast<double>(cell.authors) / static_cast<double>(cell.count);
    }
  } else {
    design.warnings.push_back("author counts missing; cell_mean_authors control dropped");
  }
  if (spec.include_zero_ref_dummy || spec.dummy_at_refcount) {
    std::int32_t k = spec.include_zero_ref_dummy ? 0 : *spec.dummy_at_refcount;
    auto& col = add_column(spec.include_zero_ref_dummy ? "zero_refs"
                                                       : "refs_eq_" + std::to_string(k));
    for (std::int64_t r = 0; r < n; ++r)
      if (graph.out_degree(design.row_nodes[static_cast<std::size_t>(r)]) == k)
        col[static_cast<std::size_t>(r)] = 1.0;
  }
  return design;
}

RegressionFit fit_ols(const DesignMatrix& design) {
  const std::int64_t n = design.rows();
  const std::int64_t p_all = design.cols();
  if (n <= p_all)
    throw NumericError("regression: " + std::to_string(n) + " observations for " +
                       std::to_string(p_all) + " columns");

  // Working copy, column-major, with the response appended so Householder
  // reflections transform it in the same sweep.
  std::vector<std::vector<double>> work = design.columns;
  std::vector<double> qty = design.response;

  std::vector<double> initial_norm(static_cast<std::size_t>(p_all));
  for (std::int64_t j = 0; j < p_all; ++j) {
    double s = 0.0;
    for (double x : work[static_cast<std::size_t>(j)]) s += x * x;
    initial_norm[static_cast<std::size_t>(j)] = std::sqrt(s);
  }

  RegressionFit fit;
  fit.n = n;
  fit.row_nodes = design.row_nodes;
  fit.reference_year = design.reference_year;
  fit.reference_field = design.reference_field;

  // Householder sweep, skipping columns whose remaining mass vanishes:
  // those are linear combinations of the columns already processed.
  std::vector<std::int64_t> kept;  // original index per processed column
  std::vector<std::vector<double>> hh;  // reflector per kept column
  for (std::int64_t j = 0; j < p_all; ++j) {
    auto& col = work[static_cast<std::size_t>(j)];
    const std::int64_t row0 = static_cast<std::int64_t>(kept.size());
    double norm = 0.0;
    for (std::int64_t i = row0; i < n; ++i)
      norm += col[static_cast<std::size_t>(i)] * col[static_cast<std::size_t>(i)];
    norm = std::sqrt(norm);
    if (norm <= 1e-10 * (1.0 + initial_norm[static_cast<std::size_t>(j)])) {
      fit.dropped_columns.push_back(design.column_names[static_cast<std::size_t>(j)]);
      continue;
    }
    // Build the reflector v = x +- ||x|| e1 over rows [row0, n).
    std::vector<double> v(col.begin() + row0, col.end());
    double alpha = v[0] >= 0.0 ? -norm : norm;
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 > 0.0) {
      auto reflect = [&](std::vector<double>& target) {
        double dot = 0.0;
        for (std::int64_t i = row0; i < n; ++i)
          dot += v[static_cast<std::size_t>(i - row0)] * target[static_cast<std::size_t>(i)];
        double scale = 2.0 * dot / vnorm2;
        for (std::int64_t i = row0; i < n; ++i)
          target[static_cast<std::size_t>(i)] -= scale * v[static_cast<std::size_t>(i - row0)];
      };
      for (std::int64_t k = j + 1; k < p_all; ++k) reflect(work[static_cast<std::size_t>(k)]);
      reflect(qty);
      reflect(col);
    }
    col[static_cast<std::size_t>(row0)] = alpha;  // exact pivot of R
    kept.push_back(j);
    hh.push_back(std::move(v));
  }

  const std::int64_t rank = static_cast<std::int64_t>(kept.size());
  fit.rank = rank;
  if (n <= rank) throw NumericError("regression: rank exceeds observation count");

  // Back substitution on the top rank x rank triangle.
  std::vector<double> beta_kept(static_cast<std::size_t>(rank), 0.0);
  for (std::int64_t r = rank - 1; r >= 0; --r) {
    double acc = qty[static_cast<std::size_t>(r)];
    for (std::int64_t c = r + 1; c < rank; ++c)
      acc -= work[static_cast<std::size_t>(kept[static_cast<std::size_t>(c)])]
                 [static_cast<std::size_t>(r)] *
             beta_kept[static_cast<std::size_t>(c)];
    beta_kept[static_cast<std::size_t>(r)] =
        acc / work[static_cast<std::size_t>(kept[static_cast<std::size_t>(r)])]
                  [static_cast<std::size_t>(r)];
  }

  // Residuals and fit statistics from the original data.
  fit.residuals.assign(static_cast<std::size_t>(n), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::int64_t c = 0; c < rank; ++c)
      pred += design.columns[static_cast<std::size_t>(kept[static_cast<std::size_t>(c)])]
                            [static_cast<std::size_t>(i)] *
              beta_kept[static_cast<std::size_t>(c)];
    fit.residuals[static_cast<std::size_t>(i)] = design.response[static_cast<std::size_t>(i)] - pred;
  }
  double y_mean = 0.0, y_abs = 0.0;
  for (double y : design.response) {
    y_mean += y;
    y_abs = std::max(y_abs, std::abs(y));
  }
  y_mean /= static_cast<double>(n);
  double sst = 0.0, ssr = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    double dy = design.response[static_cast<std::size_t>(i)] - y_mean;
    sst += dy * dy;
    ssr += fit.residuals[static_cast<std::size_t>(i)] * fit.residuals[static_cast<std::size_t>(i)];
  }
  // A response without variance beyond rounding has nothing to explain.
  double rounding = 64.0 * std::numeric_limits<double>::epsilon() * y_abs;
  bool degenerate = sst <= static_cast<double>(n) * rounding * rounding;
  fit.r2 = degenerate ? 0.0 : 1.0 - ssr / sst;
  const std::int64_t p_slopes = rank - 1;  // non-intercept kept columns
  const double dof = static_cast<double>(n - rank);
  fit.sigma2 = dof > 0.0 ? ssr / dof : 0.0;
  fit.adjusted_r2 = n - p_slopes - 1 > 0
                        ? 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) /
                                    static_cast<double>(n - p_slopes - 1)
                        : fit.r2;

  // Classical standard errors: diag((R^T R)^-1) via forward solves on R^T.
  std::vector<double> se_kept(static_cast<std::size_t>(rank), 0.0);
  for (std::int64_t jj = 0; jj < rank; ++jj) {
    // Solve R^T w = e_jj; R is upper triangular so R^T is lower.
    std::vector<double> w(static_cast<std::size_t>(rank), 0.0);
    for (std::int64_t r = 0; r < rank; ++r) {
      double rhs = r == jj ? 1.0 : 0.0;
      for (std::int64_t c = 0; c < r; ++c)
        rhs -= work[static_cast<std::size_t>(kept[static_cast<std::size_t>(r)])]
                   [static_cast<std::size_t>(c)] *
               w[static_cast<std::size_t>(c)];
      w[static_cast<std::size_t>(r)] =
          rhs / work[static_cast<std::size_t>(kept[static_cast<std::size_t>(r)])]
                    [static_cast<std::size_t>(r)];
    }
    double norm2 = 0.0;
    for (double x : w) norm2 += x * x;
    se_kept[static_cast<std::size_t>(jj)] = std::sqrt(fit.sigma2 * norm2);
  }

  fit.coefficients.resize(static_cast<std::size_t>(p_all));
  std::vector<bool> kept_mask(static_cast<std::size_t>(p_all), false);
  for (std::int64_t c = 0; c < rank; ++c)
    kept_mask[static_cast<std::size_t>(kept[static_cast<std::size_t>(c)])] = true;
  std::int64_t c = 0;
  for (std::int64_t j = 0; j < p_all; ++j) {
    Coefficient& coef = fit.coefficients[static_cast<std::size_t>(j)];
    coef.name = design.column_names[static_cast<std::size_t>(j)];
    if (!kept_mask[static_cast<std::size_t>(j)]) {
      coef.dropped = true;
      continue;
    }
    coef.estimate = beta_kept[static_cast<std::size_t>(c)];
    coef.se = se_kept[static_cast<std::size_t>(c)];
    coef.t = coef.se > 0.0 ? coef.estimate / coef.se : 0.0;
    coef.p = coef.se > 0.0 ? student_t_two_sided_p(coef.t, dof) : 1.0;
    ++c;
  }
  return fit;
}

const Coefficient* RegressionFit::find(const std::string& name) const {
  for (const auto& coef : coefficients)
    if (coef.name == name) return &coef;
  return nullptr;
}

RmseByRefcount rmse_by_refcount(const RegressionFit& fit, const CitationGraph& graph,
                                std::int32_t cap) {
  RmseByRefcount table;
  table.cap = cap;
  std::map<std::int32_t, std::pair<std::int64_t, double>> acc;  // count, sum of squares
  std::pair<std::int64_t, double> tail{0, 0.0};
  for (std::size_t i = 0; i < fit.row_nodes.size(); ++i) {
    std::int32_t refs = graph.out_degree(fit.row_nodes[i]);
    double r2 = fit.residuals[i] * fit.residuals[i];
    if (refs > cap) {
      ++tail.first;
      tail.second += r2;
    } else {
      auto& slot = acc[refs];
      ++slot.first;
      slot.second += r2;
    }
  }
  for (const auto& [refs, slot] : acc)
    table.buckets[refs] = {slot.first, std::sqrt(slot.second / static_cast<double>(slot.first))};
  if (tail.first > 0)
    table.tail = {tail.first, std::sqrt(tail.second / static_cast<double>(tail.first))};
  return table;
}

std::vector<SweepRow> dummy_sweep(const CitationGraph& graph, const std::vector<NodeCd>& values,
                                  std::int32_t k_max) {
  if (k_max < 1) throw SchemaError("dummy sweep: k_max must be >= 1");
  std::vector<SweepRow> rows;
  for (std::int32_t k = 0; k <= k_max; ++k) {
    RegressionSpec spec;
    spec.dummy_at_refcount = k;
    RegressionFit fit = fit_ols(build_design(graph, values, spec));
    rows.push_back({k, fit.adjusted_r2});
  }
  return rows;
}

std::vector<AdjustedYearRow> adjusted_cd_series(const RegressionFit& fit) {
  const Coefficient* intercept = fit.find("intercept");
  if (!intercept) throw NumericError("adjusted series: fit lacks an intercept");
  std::vector<AdjustedYearRow> rows;
  bool any_year = false;
  for (const auto& coef : fit.coefficients) {
    if (coef.name.rfind("year=", 0) != 0) continue;
    any_year = true;
    AdjustedYearRow row;
    row.year = std::stoi(coef.name.substr(5));
    row.value = intercept->estimate + coef.estimate;
    row.se = coef.dropped ? 0.0 : coef.se;
    row.ci_low = row.value - 1.96 * row.se;
    row.ci_high = row.value + 1.96 * row.se;
    rows.push_back(row);
  }
  if (!any_year) throw NumericError("adjusted series: fit lacks year fixed effects");
  // Reference year: zero effect on top of the intercept, zero band.
  rows.push_back({fit.reference_year, intercept->estimate, 0.0, intercept->estimate,
                  intercept->estimate});
  std::sort(rows.begin(), rows.end(),
            [](const AdjustedYearRow& a, const AdjustedYearRow& b) { return a.year < b.year; });
  return rows;
}

std::string format_fit_report(const RegressionFit& fit) {
  std::ostringstream out;
  out << "variable                    estimate      sig\n";
  out << "---------------------------------------------\n";
  for (const auto& coef : fit.coefficients) {
    char buf[128];
    if (coef.dropped) {
      std::snprintf(buf, sizeof(buf), "%-24s %12s  dropped\n", coef.name.c_str(), "-");
    } else {
      std::snprintf(buf, sizeof(buf), "%-24s %12.4g  %s\n", coef.name.c_str(), coef.estimate,
                    stars(coef.p).c_str());
    }
    out << buf;
  }
  out << "---------------------------------------------\n";
  out << "N                        " << fit.n << "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "Adjusted R^2             %.4f\n", fit.adjusted_r2);
  out << buf;
  out << "significance: *** p<0.01, ** p<0.05, * p<0.1 (two-sided t)\n";
  return out.str();
}

void write_fit_csv(const RegressionFit& fit, const std::string& path) {
  CsvWriter out(path);
  out.row({"name", "estimate", "se", "t", "p", "stars", "dropped"});
  for (const auto& coef : fit.coefficients) {
    out.row({coef.name, format_double(coef.estimate), format_double(coef.se),
             format_double(coef.t), format_double(coef.p), stars(coef.p),
             coef.dropped ? "1" : "0"});
  }
  out.close();
}

void write_rmse_csv(const RmseByRefcount& table, const std::string& path) {
  CsvWriter out(path);
  out.row({"refcount", "n", "rmse"});
  for (const auto& [refs, bucket] : table.buckets)
    out.row({std::to_string(refs), std::to_string(bucket.count), format_double(bucket.rmse)});
  if (table.tail.count > 0)
    out.row({std::to_string(table.cap) + "+", std::to_string(table.tail.count),
             format_double(table.tail.rmse)});
  out.close();
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  CsvWriter out(path);
  out.row({"k", "adjusted_r2"});
  for (const auto& row : rows)
    out.row({std::to_string(row.k), format_double(row.adjusted_r2)});
  out.close();
}

void write_adjusted_series_csv(const std::vector<AdjustedYearRow>& rows,
                               const std::string& path) {
  CsvWriter out(path);
  out.row({"year", "value", "se", "ci_low", "ci_high"});
  for (const auto& row : rows)
    out.row({std::to_string(row.year), format_double(row.value), format_double(row.se),
             format_double(row.ci_low), format_double(row.ci_high)});
  out.close();
}

}  // namespace disruptix
