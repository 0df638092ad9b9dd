#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace disruptix {

enum class HistogramMode {
  Correct,
  // Reproduces a binwidth-edge construction that silently drops values
  // equal to the range maximum: every bin is half-open, including the
  // last. Only takes effect when the bin grid comes from a binwidth; an
  // explicit bin count always produces the correct closed last bin.
  BinwidthBug,
};

struct HistogramSpec {
  HistogramMode mode = HistogramMode::Correct;
  std::int32_t bins = 0;     // exactly one of bins/binwidth is set
  double binwidth = 0.0;
  double lo = -1.0;
  double hi = 1.0;
};

struct Histogram {
  std::vector<double> edges;       // counts.size() + 1
  std::vector<std::int64_t> counts;
  std::int64_t dropped = 0;        // values lost to the binwidth bug
};

// Values must lie within [lo, hi]. In Correct mode counts sum to the
// number of values and the last bin is closed on the right; in
// BinwidthBug mode values equal to hi are dropped and reported.
Histogram histogram(std::span<const double> values, const HistogramSpec& spec);

// CSV: bin_lo,bin_hi,count.
void write_histogram_csv(const Histogram& hist, const std::string& path);

}  // namespace disruptix
