#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "smflow/error.hpp"
#include "smflow/symbols.hpp"
#include "smflow/te_config.hpp"

namespace smflow {

// Reference transfer entropy by naive enumeration, for small inputs. Builds
// the full (b_next, b_hist, a_hist) count table with map lookups and walks it
// term by term. Deliberately shares no code with transfer_entropy; the two
// must agree to within 1e-12 bits and the tests hold them to that.
inline double te_oracle(const SymbolSeries& src, const SymbolSeries& dst, const TeConfig& cfg) {
  if (cfg.bins < 2 || cfg.history_k < 1 || cfg.lag < 1) {
    raise(Errc::InvalidConfig, "bad estimator configuration");
  }
  if (src.size() != dst.size()) raise(Errc::LengthMismatch, "source/destination lengths differ");
  const int k = cfg.history_k;
  const int lag = cfg.lag;
  const std::size_t n = dst.size();
  if (n < static_cast<std::size_t>(lag + k + 1)) {
    raise(Errc::SeriesTooShort, "need at least lag + history_k + 1 samples");
  }
  for (int v : src.symbols) {
    if (v < 0 || v >= src.alphabet) raise(Errc::InvalidConfig, "symbol out of alphabet range");
  }
  for (int v : dst.symbols) {
    if (v < 0 || v >= dst.alphabet) raise(Errc::InvalidConfig, "symbol out of alphabet range");
  }

  using Key = std::vector<int>;
  std::map<Key, long> full;        // [b_next, b_hist..., a_hist...]
  std::map<Key, long> hist_both;   // [b_hist..., a_hist...]
  std::map<Key, long> next_bhist;  // [b_next, b_hist...]
  std::map<Key, long> bhist_only;  // [b_hist...]
  long total = 0;

  for (std::size_t t = static_cast<std::size_t>(k) - 1; t + lag < n; ++t) {
    Key bh, ah;
    for (int j = 0; j < k; ++j) {
      bh.push_back(dst.symbols[t - j]);
      ah.push_back(src.symbols[t - j]);
    }
    const int bn = dst.symbols[t + lag];

    Key key_full;
    key_full.push_back(bn);
    key_full.insert(key_full.end(), bh.begin(), bh.end());
    key_full.insert(key_full.end(), ah.begin(), ah.end());

    Key key_hist = bh;
    key_hist.insert(key_hist.end(), ah.begin(), ah.end());

    Key key_next = bh;
    key_next.insert(key_next.begin(), bn);

    ++full[key_full];
    ++hist_both[key_hist];
    ++next_bhist[key_next];
    ++bhist_only[bh];
    ++total;
  }

  double te = 0.0;
  for (const auto& [key, count] : full) {
    const int bn = key[0];
    Key bh(key.begin() + 1, key.begin() + 1 + k);
    Key ah(key.begin() + 1 + k, key.end());

    Key key_hist = bh;
    key_hist.insert(key_hist.end(), ah.begin(), ah.end());
    Key key_next = bh;
    key_next.insert(key_next.begin(), bn);

    const double p_joint = static_cast<double>(count) / static_cast<double>(total);
    const double p_next_given_both =
        static_cast<double>(count) / static_cast<double>(hist_both.at(key_hist));
    const double p_next_given_bhist = static_cast<double>(next_bhist.at(key_next)) /
                                      static_cast<double>(bhist_only.at(bh));
    te += p_joint * std::log2(p_next_given_both / p_next_given_bhist);
  }
  return te < 0.0 ? 0.0 : te;
}

}  // namespace smflow
