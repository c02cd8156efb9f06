#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "smflow/error.hpp"
#include "smflow/rng.hpp"
#include "smflow/symbols.hpp"
#include "smflow/te_config.hpp"

namespace smflow {

// Plug-in (histogram) estimators over symbol series, all in bits. Estimates
// are clamped at zero on return; the underlying quantities are non-negative
// and only floating point rounding can push a sum a few ulp below zero.

namespace detail {

inline double clamp_bits(double v) { return v < 0.0 ? 0.0 : v; }

inline void require_symbols(const SymbolSeries& s) {
  if (s.alphabet < 1) raise(Errc::InvalidConfig, "alphabet must be positive");
  for (int v : s.symbols) {
    if (v < 0 || v >= s.alphabet) raise(Errc::InvalidConfig, "symbol out of alphabet range");
  }
}

inline double entropy_of_counts(const std::vector<std::int64_t>& counts, double total) {
  double h = 0.0;
  for (std::int64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace detail

inline double entropy(const SymbolSeries& x) {
  if (x.symbols.empty()) raise(Errc::EmptySeries, "entropy of an empty series");
  detail::require_symbols(x);
  std::vector<std::int64_t> counts(x.alphabet, 0);
  for (int s : x.symbols) ++counts[s];
  return detail::clamp_bits(
      detail::entropy_of_counts(counts, static_cast<double>(x.symbols.size())));
}

// Joint empirical frequencies over (b_next, b_history, a_history) tuples,
// flattened over a mixed-radix index, plus the three marginals the transfer
// entropy sum needs. One scan fills all four tables.
struct JointHistogram {
  std::vector<std::int64_t> joint;       // (b_next, b_hist, a_hist)
  std::vector<std::int64_t> hist_pair;   // (b_hist, a_hist)
  std::vector<std::int64_t> next_bhist;  // (b_next, b_hist)
  std::vector<std::int64_t> bhist;       // (b_hist)
  std::int64_t total = 0;
};

inline JointHistogram joint_histogram(const SymbolSeries& src, const SymbolSeries& dst,
                                      const TeConfig& cfg) {
  cfg.validate();
  if (src.size() != dst.size()) raise(Errc::LengthMismatch, "source/destination lengths differ");
  const int k = cfg.history_k;
  const std::size_t n = dst.size();
  const std::size_t need = static_cast<std::size_t>(cfg.lag) + k + 1;
  if (n < need) raise(Errc::SeriesTooShort, "need at least lag + history_k + 1 samples");

  const int mb = dst.alphabet;
  const int ma = src.alphabet;
  std::size_t bpow = 1, apow = 1;
  for (int i = 0; i < k; ++i) {
    bpow *= static_cast<std::size_t>(mb);
    apow *= static_cast<std::size_t>(ma);
  }

  JointHistogram h;
  h.joint.assign(static_cast<std::size_t>(mb) * bpow * apow, 0);
  h.hist_pair.assign(bpow * apow, 0);
  h.next_bhist.assign(static_cast<std::size_t>(mb) * bpow, 0);
  h.bhist.assign(bpow, 0);

  // t indexes the most recent history sample; the prediction target is
  // dst[t + lag].
  for (std::size_t t = static_cast<std::size_t>(k) - 1; t + cfg.lag < n; ++t) {
    std::size_t bh = 0, ah = 0;
    for (int j = 0; j < k; ++j) {
      bh = bh * mb + static_cast<std::size_t>(dst.symbols[t - j]);
      ah = ah * ma + static_cast<std::size_t>(src.symbols[t - j]);
    }
    const std::size_t bn = static_cast<std::size_t>(dst.symbols[t + cfg.lag]);
    ++h.joint[(bn * bpow + bh) * apow + ah];
    ++h.hist_pair[bh * apow + ah];
    ++h.next_bhist[bn * bpow + bh];
    ++h.bhist[bh];
    ++h.total;
  }
  return h;
}

inline double mutual_information(const SymbolSeries& x, const SymbolSeries& y) {
  if (x.size() != y.size()) raise(Errc::LengthMismatch, "series lengths differ");
  if (x.symbols.empty()) raise(Errc::EmptySeries, "mutual information of empty series");
  detail::require_symbols(x);
  detail::require_symbols(y);
  const std::size_t my = y.alphabet;
  std::vector<std::int64_t> joint(static_cast<std::size_t>(x.alphabet) * my, 0);
  std::vector<std::int64_t> cx(x.alphabet, 0), cy(y.alphabet, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++joint[static_cast<std::size_t>(x.symbols[i]) * my + y.symbols[i]];
    ++cx[x.symbols[i]];
    ++cy[y.symbols[i]];
  }
  const double total = static_cast<double>(x.size());
  const double mi = detail::entropy_of_counts(cx, total) + detail::entropy_of_counts(cy, total) -
                    detail::entropy_of_counts(joint, total);
  return detail::clamp_bits(mi);
}

// Transfer entropy from src to dst:
//   TE = sum p(b_next, b_hist, a_hist)
//          * log2[ p(b_next | b_hist, a_hist) / p(b_next | b_hist) ]
// where the histories are the history_k most recent symbols of each series
// and the prediction target sits lag steps ahead.
inline double transfer_entropy(const SymbolSeries& src, const SymbolSeries& dst,
                               const TeConfig& cfg = {}) {
  detail::require_symbols(src);
  detail::require_symbols(dst);
  const JointHistogram h = joint_histogram(src, dst, cfg);
  const std::size_t bpow = h.bhist.size();
  const std::size_t apow = h.hist_pair.size() / bpow;

  double te = 0.0;
  const double total = static_cast<double>(h.total);
  for (std::size_t idx = 0; idx < h.joint.size(); ++idx) {
    const std::int64_t c = h.joint[idx];
    if (c == 0) continue;
    const std::size_t ah = idx % apow;
    const std::size_t bh = (idx / apow) % bpow;
    const std::size_t bn = idx / (apow * bpow);
    const double num = static_cast<double>(c) * static_cast<double>(h.bhist[bh]);
    const double den = static_cast<double>(h.hist_pair[bh * apow + ah]) *
                       static_cast<double>(h.next_bhist[bn * bpow + bh]);
    te += static_cast<double>(c) / total * std::log2(num / den);
  }
  return detail::clamp_bits(te);
}

struct SurrogateBaseline {
  double mean = 0.0;
  double q95 = 0.0;
};

// Significance null for plug-in TE: the source is circularly shifted by a
// random offset in [ceil(N/8), N - ceil(N/8)], which destroys the src->dst
// coupling while preserving both marginals and the source's own dynamics.
// q95 is the nearest-rank empirical 95th percentile. Pure function of
// (inputs, seed).
inline SurrogateBaseline surrogate_baseline(const SymbolSeries& src, const SymbolSeries& dst,
                                            const TeConfig& cfg, int n_surrogates,
                                            std::uint64_t seed) {
  if (n_surrogates < 20) raise(Errc::InvalidConfig, "need at least 20 surrogates");
  const std::size_t n = src.size();
  if (n != dst.size()) raise(Errc::LengthMismatch, "source/destination lengths differ");
  const std::size_t margin = (n + 7) / 8;
  if (margin > n - margin) raise(Errc::SeriesTooShort, "series too short for surrogate shifts");

  Rng rng = Rng::substream(seed, "surrogate");
  SymbolSeries shifted = src;
  std::vector<double> values;
  values.reserve(n_surrogates);
  double sum = 0.0;
  for (int i = 0; i < n_surrogates; ++i) {
    const std::size_t offset = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(margin), static_cast<std::int64_t>(n - margin)));
    for (std::size_t t = 0; t < n; ++t) {
      shifted.symbols[t] = src.symbols[(t + offset) % n];
    }
    const double te = transfer_entropy(shifted, dst, cfg);
    values.push_back(te);
    sum += te;
  }
  std::sort(values.begin(), values.end());
  const std::size_t rank =
      static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n_surrogates)));
  return SurrogateBaseline{sum / static_cast<double>(n_surrogates), values[rank - 1]};
}

}  // namespace smflow
