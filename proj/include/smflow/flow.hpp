#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "smflow/channels.hpp"
#include "smflow/infotheory.hpp"
#include "smflow/recording.hpp"

namespace smflow {

// Directed transfer entropy between every ordered pair of channels, in bits.
// Indexed (source, destination) in canonical order; the diagonal is
// undefined and stored as NaN.
struct FlowMatrix {
  std::array<std::array<double, kNumChannels>, kNumChannels> te{};
  TeConfig cfg;
  RecordingMeta provenance;

  double at(int src, int dst) const { return te[src][dst]; }

  // Sum of all defined (off-diagonal) entries.
  double total_mass() const {
    double sum = 0.0;
    for (int i = 0; i < kNumChannels; ++i) {
      for (int j = 0; j < kNumChannels; ++j) {
        if (i != j) sum += te[i][j];
      }
    }
    return sum;
  }
};

inline std::array<SymbolSeries, kNumChannels> discretize_channels(const Recording& rec,
                                                                  const TeConfig& cfg) {
  std::array<SymbolSeries, kNumChannels> symbols;
  for (int c = 0; c < kNumChannels; ++c) {
    symbols[c] = discretize(rec.column(c), cfg.bins, cfg.discretization);
    symbols[c].origin = channel_at(c);
  }
  return symbols;
}

// TE for all 240 ordered pairs. Each channel is discretized once over the
// full recording so that every pair sees the same symbol streams; entries are
// independent of evaluation order.
inline FlowMatrix te_matrix(const Recording& rec, const TeConfig& cfg = {}) {
  cfg.validate();
  const auto symbols = discretize_channels(rec, cfg);
  FlowMatrix fm;
  fm.cfg = cfg;
  fm.provenance = rec.meta();
  for (int i = 0; i < kNumChannels; ++i) {
    for (int j = 0; j < kNumChannels; ++j) {
      fm.te[i][j] = (i == j) ? std::numeric_limits<double>::quiet_NaN()
                             : transfer_entropy(symbols[i], symbols[j], cfg);
    }
  }
  return fm;
}

// Per-pair surrogate 95th percentiles for significance marking. The seed
// schedule is keyed by the pair indices, so the partition into significant
// and insignificant flows is reproducible regardless of evaluation order.
struct BaselineMatrix {
  std::array<std::array<double, kNumChannels>, kNumChannels> q95{};
};

inline BaselineMatrix surrogate_baselines(const Recording& rec, const TeConfig& cfg,
                                          int n_surrogates, std::uint64_t seed) {
  const auto symbols = discretize_channels(rec, cfg);
  BaselineMatrix bm;
  for (int i = 0; i < kNumChannels; ++i) {
    for (int j = 0; j < kNumChannels; ++j) {
      if (i == j) {
        bm.q95[i][j] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const std::uint64_t pair_seed =
          seed ^ fnv1a64("surrogate/pair/" + std::to_string(i) + "/" + std::to_string(j));
      bm.q95[i][j] = surrogate_baseline(symbols[i], symbols[j], cfg, n_surrogates, pair_seed).q95;
    }
  }
  return bm;
}

struct Flow {
  ChannelId source;
  ChannelId destination;
  double bits = 0.0;
  bool significant = false;
};

// Kind-to-kind exclusion pattern, optionally restricted to same-leg pairs.
struct ExcludePattern {
  ChannelKind source_kind;
  ChannelKind destination_kind;
  bool same_leg_only = true;

  bool matches(ChannelId src, ChannelId dst) const {
    if (src.kind != source_kind || dst.kind != destination_kind) return false;
    return !same_leg_only || src.leg == dst.leg;
  }
};

// The flow plots leave out the same-leg motor-to-hip edges, which would
// otherwise dominate every panel.
inline std::vector<ExcludePattern> panel_cd_exclusions() {
  return {ExcludePattern{ChannelKind::Motor, ChannelKind::Hip, true}};
}

// Top-k flows by bits, descending, ties broken by canonical (source,
// destination) order. Excluded patterns are dropped before ranking. If
// baselines are given, a flow is significant iff its bits exceed the pair's
// surrogate q95.
inline std::vector<Flow> select_flows(const FlowMatrix& fm, std::size_t k,
                                      const std::vector<ExcludePattern>& exclude = {},
                                      const BaselineMatrix* baselines = nullptr) {
  std::vector<Flow> flows;
  for (int i = 0; i < kNumChannels; ++i) {
    for (int j = 0; j < kNumChannels; ++j) {
      if (i == j) continue;
      const ChannelId src = channel_at(i);
      const ChannelId dst = channel_at(j);
      bool skip = false;
      for (const auto& pattern : exclude) {
        if (pattern.matches(src, dst)) {
          skip = true;
          break;
        }
      }
      if (skip) continue;
      Flow flow{src, dst, fm.te[i][j], false};
      if (baselines) flow.significant = flow.bits > baselines->q95[i][j];
      flows.push_back(flow);
    }
  }
  std::stable_sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) {
    if (a.bits != b.bits) return a.bits > b.bits;
    if (a.source.index() != b.source.index()) return a.source.index() < b.source.index();
    return a.destination.index() < b.destination.index();
  });
  if (flows.size() > k) flows.resize(k);
  return flows;
}

}  // namespace smflow
