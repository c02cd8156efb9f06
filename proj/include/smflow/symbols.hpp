#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "smflow/channels.hpp"
#include "smflow/error.hpp"

namespace smflow {

enum class Discretization { EqualFrequency, EqualWidth };

// A discretized channel: integers in [0, alphabet). The substrate every
// estimator works on.
struct SymbolSeries {
  std::vector<int> symbols;
  int alphabet = 0;
  std::optional<ChannelId> origin;

  std::size_t size() const { return symbols.size(); }
};

// Equal-frequency: bin occupancies differ by at most one; ties are broken by
// (value, original index) so the assignment is reproducible across platforms.
// Equal-width: m uniform intervals over [min, max], max mapping to bin m-1.
// A constant series maps entirely to symbol 0 under either method.
inline SymbolSeries discretize(std::span<const double> series, int bins, Discretization method) {
  if (bins < 2) raise(Errc::InvalidConfig, "bins must be >= 2");
  const std::size_t n = series.size();
  if (n == 0) raise(Errc::TooFewSamples, "cannot discretize an empty series");

  SymbolSeries out;
  out.alphabet = bins;
  out.symbols.assign(n, 0);

  const auto [min_it, max_it] = std::minmax_element(series.begin(), series.end());
  if (*min_it == *max_it) {
    return out;  // constant input, degenerate range handled as all-zero
  }

  if (method == Discretization::EqualWidth) {
    const double lo = *min_it;
    const double span = *max_it - lo;
    for (std::size_t i = 0; i < n; ++i) {
      int s = static_cast<int>((series[i] - lo) / span * bins);
      out.symbols[i] = std::clamp(s, 0, bins - 1);
    }
    return out;
  }

  if (n < static_cast<std::size_t>(bins)) {
    raise(Errc::TooFewSamples, "equal-frequency binning needs at least as many samples as bins");
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return series[a] < series[b]; });
  for (std::size_t rank = 0; rank < n; ++rank) {
    out.symbols[order[rank]] =
        static_cast<int>(rank * static_cast<std::size_t>(bins) / n);
  }
  return out;
}

// Out-of-sample binning against fixed boundaries. edges must be sorted;
// symbol(x) = number of edges <= x, so there are edges.size()+1 bins.
inline int symbol_for(double value, std::span<const double> edges) {
  int s = 0;
  for (double e : edges) {
    if (value >= e) ++s;
  }
  return s;
}

// Equal-frequency boundaries fitted on pooled (sorted) training samples:
// edge b sits at the first value of bin b, for b = 1..bins-1.
inline std::vector<double> equal_frequency_edges(std::vector<double> pooled, int bins) {
  if (bins < 2) raise(Errc::InvalidConfig, "bins must be >= 2");
  if (pooled.size() < static_cast<std::size_t>(bins)) {
    raise(Errc::TooFewSamples, "equal-frequency edges need at least as many samples as bins");
  }
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> edges;
  edges.reserve(bins - 1);
  const std::size_t n = pooled.size();
  for (int b = 1; b < bins; ++b) {
    edges.push_back(pooled[static_cast<std::size_t>(b) * n / bins]);
  }
  return edges;
}

}  // namespace smflow
