#include "disruptix/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "disruptix/csv.hpp"
#include "disruptix/errors.hpp"

namespace disruptix {

Histogram histogram(std::span<const double> values, const HistogramSpec& spec) {
  if (values.empty()) throw NumericError("histogram: no values");
  if (!(spec.hi > spec.lo)) throw NumericError("histogram: empty range");
  bool by_width = spec.binwidth != 0.0;
  if (by_width && spec.bins != 0)
    throw NumericError("histogram: give either a bin count or a binwidth, not both");
  if (by_width && !(spec.binwidth > 0.0)) throw NumericError("histogram: binwidth must be > 0");
  if (!by_width && spec.bins <= 0) throw NumericError("histogram: bin count must be > 0");

  Histogram hist;
  std::size_t nbins;
  if (by_width) {
    nbins = static_cast<std::size_t>(std::ceil((spec.hi - spec.lo) / spec.binwidth - 1e-12));
    if (nbins == 0) nbins = 1;
    hist.edges.resize(nbins + 1);
    for (std::size_t i = 0; i < nbins; ++i)
      hist.edges[i] = spec.lo + static_cast<double>(i) * spec.binwidth;
    hist.edges[nbins] = std::max(spec.lo + static_cast<double>(nbins) * spec.binwidth, spec.hi);
  } else {
    nbins = static_cast<std::size_t>(spec.bins);
    hist.edges.resize(nbins + 1);
    for (std::size_t i = 0; i <= nbins; ++i)
      hist.edges[i] = spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) /
                                    static_cast<double>(nbins);
    hist.edges[nbins] = spec.hi;
  }
  hist.counts.assign(nbins, 0);

  bool buggy = spec.mode == HistogramMode::BinwidthBug && by_width;
  for (double v : values) {
    if (v < spec.lo || v > spec.hi)
      throw NumericError("histogram: value " + format_double(v) + " outside range");
    if (v == spec.hi) {
      if (buggy) {
        ++hist.dropped;
      } else {
        ++hist.counts[nbins - 1];
      }
      continue;
    }
    auto it = std::upper_bound(hist.edges.begin(), hist.edges.end(), v);
    std::size_t bin = static_cast<std::size_t>(it - hist.edges.begin());
    bin = bin == 0 ? 0 : bin - 1;
    if (bin >= nbins) bin = nbins - 1;
    ++hist.counts[bin];
  }
  return hist;
}

void write_histogram_csv(const Histogram& hist, const std::string& path) {
  CsvWriter out(path);
  out.row({"bin_lo", "bin_hi", "count"});
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    out.row({format_double(hist.edges[i]), format_double(hist.edges[i + 1]),
             std::to_string(hist.counts[i])});
  }
  out.close();
}

}  // namespace disruptix
