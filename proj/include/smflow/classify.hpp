#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "smflow/error.hpp"
#include "smflow/recording.hpp"
#include "smflow/rng.hpp"
#include "smflow/symbols.hpp"

namespace smflow {

// Terrain classification from sensorimotor epochs. Features are per-channel
// symbol histograms over 2-second windows; a history of n consecutive epochs
// concatenates n of those histograms. The classifier is a nearest centroid
// over L1-normalized features, deterministic and parameter-free.
//
// Bin boundaries are equal-frequency quantiles fitted on the training
// episodes of each fold and applied unchanged to test epochs. Fitting them
// per episode would make every episode's total histogram uniform by
// construction and erase the class signal entirely, so the boundaries are
// shared across episodes instead; fold hygiene is preserved because test
// episodes never contribute samples to the fit.
//
// The gait-aware condition conditions the whole pipeline on the gait label:
// each gait's sub-model bins with boundaries fitted on that gait's training
// episodes alone, so its five bins resolve that gait's own signal range. The
// pooled condition cannot do that, which is a large part of why knowing the
// action context helps.

enum class ClassifyMode { Pooled, PerGait };

inline const char* mode_name(ClassifyMode m) {
  return m == ClassifyMode::Pooled ? "pooled" : "per-gait";
}

struct FeatureBinning {
  int bins = 5;
  std::array<std::vector<double>, kNumChannels> edges;
};

class Corpus {
 public:
  // Stratified fold assignment: episodes are grouped by (ground, gait) and
  // dealt round-robin after a seeded shuffle, so every ground and gait
  // appears in every fold. Folds split by episode, never by epoch.
  static Corpus build(std::vector<Recording> episodes, std::size_t epoch_len, int folds,
                      std::uint64_t fold_seed) {
    if (episodes.empty()) raise(Errc::InvalidConfig, "corpus needs at least one episode");
    if (folds < 2) raise(Errc::InvalidConfig, "need at least 2 folds");
    for (const auto& rec : episodes) {
      if (rec.rows() < epoch_len) raise(Errc::EpochTooLong, "episode shorter than one epoch");
    }
    Corpus c;
    c.episodes_ = std::move(episodes);
    c.epoch_len_ = epoch_len;
    c.folds_ = folds;
    c.fold_of_.assign(c.episodes_.size(), 0);

    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < c.episodes_.size(); ++i) {
      const auto& m = c.episodes_[i].meta();
      cells[{m.ground, m.gait}].push_back(i);
    }
    for (auto& [key, members] : cells) {
      Rng rng = Rng::substream(fold_seed, "folds/" + key.first + "/" + key.second);
      for (std::size_t i = members.size(); i > 1; --i) {
        std::swap(members[i - 1], members[rng.below(i)]);
      }
      for (std::size_t pos = 0; pos < members.size(); ++pos) {
        c.fold_of_[members[pos]] = static_cast<int>(pos % folds);
      }
    }
    return c;
  }

  const std::vector<Recording>& episodes() const { return episodes_; }
  std::size_t epoch_len() const { return epoch_len_; }
  int folds() const { return folds_; }
  int fold_of(std::size_t episode) const { return fold_of_[episode]; }

  std::size_t epochs_per_episode(std::size_t episode) const {
    return episodes_[episode].rows() / epoch_len_;
  }

  std::set<std::string> ground_labels() const {
    std::set<std::string> out;
    for (const auto& rec : episodes_) out.insert(rec.meta().ground);
    return out;
  }

  std::set<std::string> gait_labels() const {
    std::set<std::string> out;
    for (const auto& rec : episodes_) out.insert(rec.meta().gait);
    return out;
  }

  // Permutation control: ground labels reshuffled across episodes.
  Corpus with_shuffled_labels(std::uint64_t seed) const {
    Corpus c = *this;
    std::vector<std::string> labels;
    labels.reserve(c.episodes_.size());
    for (const auto& rec : c.episodes_) labels.push_back(rec.meta().ground);
    Rng rng = Rng::substream(seed, "label-shuffle");
    for (std::size_t i = labels.size(); i > 1; --i) {
      std::swap(labels[i - 1], labels[rng.below(i)]);
    }
    for (std::size_t i = 0; i < c.episodes_.size(); ++i) {
      RecordingMeta meta = c.episodes_[i].meta();
      meta.ground = labels[i];
      std::array<std::vector<double>, kNumChannels> cols;
      for (int ch = 0; ch < kNumChannels; ++ch) cols[ch] = c.episodes_[i].column(ch);
      c.episodes_[i] = Recording(std::move(cols), c.episodes_[i].dt(), std::move(meta));
    }
    return c;
  }

 private:
  std::vector<Recording> episodes_;
  std::size_t epoch_len_ = kDefaultEpochLen;
  int folds_ = 5;
  std::vector<int> fold_of_;
};

inline FeatureBinning fit_feature_bins(const Corpus& corpus, const std::vector<std::size_t>& train,
                                       int bins, const std::string& gait_filter = "") {
  FeatureBinning fb;
  fb.bins = bins;
  for (int ch = 0; ch < kNumChannels; ++ch) {
    std::vector<double> pool;
    for (std::size_t e : train) {
      if (!gait_filter.empty() && corpus.episodes()[e].meta().gait != gait_filter) continue;
      const auto& col = corpus.episodes()[e].column(ch);
      pool.insert(pool.end(), col.begin(), col.end());
    }
    if (pool.empty()) raise(Errc::InvalidConfig, "no training episodes for binning");
    fb.edges[ch] = equal_frequency_edges(std::move(pool), bins);
  }
  return fb;
}

// Histogram features for history_n consecutive epochs starting at
// epoch_index. Layout: history slot major, then channel, then bin. The
// result is L1-normalized.
inline std::vector<double> epoch_features(const Recording& rec, const FeatureBinning& fb,
                                          std::size_t epoch_len, std::size_t epoch_index,
                                          int history_n) {
  const std::size_t epochs_available = rec.rows() / epoch_len;
  if (history_n < 1) raise(Errc::InvalidConfig, "history_n must be >= 1");
  if (epoch_index + history_n > epochs_available) {
    raise(Errc::InsufficientHistory, "not enough consecutive epochs in this episode");
  }
  const int m = fb.bins;
  std::vector<double> features(static_cast<std::size_t>(kNumChannels) * m * history_n, 0.0);
  for (int h = 0; h < history_n; ++h) {
    const std::size_t start = (epoch_index + h) * epoch_len;
    for (int ch = 0; ch < kNumChannels; ++ch) {
      const auto& col = rec.column(ch);
      double* hist = features.data() + (static_cast<std::size_t>(h) * kNumChannels + ch) * m;
      for (std::size_t t = start; t < start + epoch_len; ++t) {
        ++hist[symbol_for(col[t], fb.edges[ch])];
      }
    }
  }
  const double mass = static_cast<double>(epoch_len) * kNumChannels * history_n;
  for (double& f : features) f /= mass;
  return features;
}

// Convenience overload over an Epoch window (start need not be aligned to
// the epoch grid; histories extend forward from the epoch's start).
inline std::vector<double> epoch_features(const Epoch& epoch, const FeatureBinning& fb,
                                          int history_n) {
  if (!epoch.source) raise(Errc::InvalidConfig, "epoch has no source recording");
  if (epoch.length == 0) raise(Errc::InvalidConfig, "epoch length must be positive");
  const std::size_t available = (epoch.source->rows() - epoch.start_index) / epoch.length;
  if (history_n < 1) raise(Errc::InvalidConfig, "history_n must be >= 1");
  if (static_cast<std::size_t>(history_n) > available) {
    raise(Errc::InsufficientHistory, "not enough consecutive epochs after this start");
  }
  const int m = fb.bins;
  std::vector<double> features(static_cast<std::size_t>(kNumChannels) * m * history_n, 0.0);
  for (int h = 0; h < history_n; ++h) {
    const std::size_t start = epoch.start_index + static_cast<std::size_t>(h) * epoch.length;
    for (int ch = 0; ch < kNumChannels; ++ch) {
      const auto& col = epoch.source->column(ch);
      double* hist = features.data() + (static_cast<std::size_t>(h) * kNumChannels + ch) * m;
      for (std::size_t t = start; t < start + epoch.length; ++t) {
        ++hist[symbol_for(col[t], fb.edges[ch])];
      }
    }
  }
  const double mass = static_cast<double>(epoch.length) * kNumChannels * history_n;
  for (double& f : features) f /= mass;
  return features;
}

struct NearestCentroid {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> centroids;

  const std::string& predict(const std::vector<double>& features) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centroids.size(); ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j < features.size(); ++j) {
        const double diff = features[j] - centroids[i][j];
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return labels[best];
  }
};

namespace detail {

inline NearestCentroid fit_centroids(const std::vector<std::vector<double>>& features,
                                     const std::vector<std::string>& labels) {
  std::map<std::string, std::pair<std::vector<double>, std::size_t>> sums;
  for (std::size_t i = 0; i < features.size(); ++i) {
    auto& [sum, count] = sums[labels[i]];
    if (sum.empty()) sum.assign(features[i].size(), 0.0);
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += features[i][j];
    ++count;
  }
  NearestCentroid nc;
  for (auto& [label, entry] : sums) {
    auto& [sum, count] = entry;
    for (double& v : sum) v /= static_cast<double>(count);
    nc.labels.push_back(label);
    nc.centroids.push_back(std::move(sum));
  }
  return nc;
}

}  // namespace detail

// A trained classifier. Pooled mode keeps one binning and one centroid set
// over all gaits; per-gait mode keeps a (binning, centroids) pair per gait
// and routes test epochs by their known gait label. A single-class corpus
// yields a model that always answers that class (flagged, not an error).
struct GaitSubModel {
  FeatureBinning binning;
  NearestCentroid centroids;
};

struct Model {
  ClassifyMode mode = ClassifyMode::Pooled;
  std::size_t epoch_len = kDefaultEpochLen;
  int history_n = 1;
  GaitSubModel pooled;
  std::map<std::string, GaitSubModel> per_gait;
  bool single_class = false;

  const GaitSubModel& sub_model(const std::string& gait) const {
    if (mode == ClassifyMode::Pooled) return pooled;
    auto it = per_gait.find(gait);
    if (it == per_gait.end()) raise(Errc::InvalidConfig, "no sub-model for gait '" + gait + "'");
    return it->second;
  }

  const std::string& predict(const Recording& rec, std::size_t epoch_index) const {
    const GaitSubModel& sub = sub_model(rec.meta().gait);
    const auto f = epoch_features(rec, sub.binning, epoch_len, epoch_index, history_n);
    return sub.centroids.predict(f);
  }
};

namespace detail {

inline GaitSubModel fit_sub_model(const Corpus& corpus, const std::vector<std::size_t>& train,
                                  int history_n, int bins, const std::string& gait_filter) {
  GaitSubModel sub;
  sub.binning = fit_feature_bins(corpus, train, bins, gait_filter);
  std::vector<std::vector<double>> features;
  std::vector<std::string> grounds;
  for (std::size_t e : train) {
    const auto& rec = corpus.episodes()[e];
    if (!gait_filter.empty() && rec.meta().gait != gait_filter) continue;
    for (std::size_t i = 0; i + history_n <= corpus.epochs_per_episode(e); ++i) {
      features.push_back(epoch_features(rec, sub.binning, corpus.epoch_len(), i, history_n));
      grounds.push_back(rec.meta().ground);
    }
  }
  sub.centroids = fit_centroids(features, grounds);
  return sub;
}

}  // namespace detail

inline Model train(const Corpus& corpus, ClassifyMode mode, int history_n = 1, int bins = 5) {
  std::vector<std::size_t> all;
  for (std::size_t e = 0; e < corpus.episodes().size(); ++e) all.push_back(e);
  Model model;
  model.mode = mode;
  model.epoch_len = corpus.epoch_len();
  model.history_n = history_n;
  model.single_class = corpus.ground_labels().size() < 2;
  if (mode == ClassifyMode::Pooled) {
    model.pooled = detail::fit_sub_model(corpus, all, history_n, bins, "");
  } else {
    for (const std::string& gait : corpus.gait_labels()) {
      model.per_gait[gait] = detail::fit_sub_model(corpus, all, history_n, bins, gait);
    }
  }
  return model;
}

struct AccuracyRow {
  std::string mode;
  int history_n = 1;
  double mean_acc = 0.0;
  double best_acc = 0.0;
  std::string best_gait;
  std::size_t n_test = 0;
  std::map<std::string, double> per_gait_acc;
  std::vector<double> per_fold_acc;
};

struct AccuracyReport {
  std::vector<AccuracyRow> rows;

  const AccuracyRow& row(ClassifyMode mode, int history_n) const {
    for (const auto& r : rows) {
      if (r.mode == mode_name(mode) && r.history_n == history_n) return r;
    }
    raise(Errc::InvalidConfig, "no such report row");
  }
};

// K-fold cross-validated accuracy for each history length. Per fold, bin
// boundaries and centroids come from the training episodes only. Reported
// accuracy is per-gait: the mean across gaits and the best single gait
// (pooled models are still scored per gait; they just cannot use the gait
// label when predicting).
inline AccuracyReport evaluate(const Corpus& corpus, ClassifyMode mode,
                               const std::vector<int>& history_lengths, int bins = 5) {
  if (corpus.ground_labels().size() < 2) {
    raise(Errc::InvalidConfig, "evaluation needs at least two ground labels");
  }
  AccuracyReport report;
  for (int history_n : history_lengths) {
    AccuracyRow row;
    row.mode = mode_name(mode);
    row.history_n = history_n;
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_gait;  // correct, total
    for (int fold = 0; fold < corpus.folds(); ++fold) {
      std::vector<std::size_t> train_eps, test_eps;
      for (std::size_t e = 0; e < corpus.episodes().size(); ++e) {
        (corpus.fold_of(e) == fold ? test_eps : train_eps).push_back(e);
      }
      std::map<std::string, GaitSubModel> sub_models;
      if (mode == ClassifyMode::Pooled) {
        sub_models[""] = detail::fit_sub_model(corpus, train_eps, history_n, bins, "");
      } else {
        for (const std::string& gait : corpus.gait_labels()) {
          sub_models[gait] = detail::fit_sub_model(corpus, train_eps, history_n, bins, gait);
        }
      }

      std::size_t fold_correct = 0, fold_total = 0;
      for (std::size_t e : test_eps) {
        const auto& rec = corpus.episodes()[e];
        const std::string& gait = rec.meta().gait;
        const GaitSubModel& sub =
            sub_models.at(mode == ClassifyMode::Pooled ? std::string() : gait);
        for (std::size_t i = 0; i + history_n <= corpus.epochs_per_episode(e); ++i) {
          const auto f = epoch_features(rec, sub.binning, corpus.epoch_len(), i, history_n);
          const bool correct = sub.centroids.predict(f) == rec.meta().ground;
          auto& [ok, total] = per_gait[gait];
          ok += correct ? 1 : 0;
          ++total;
          fold_correct += correct ? 1 : 0;
          ++fold_total;
        }
      }
      row.per_fold_acc.push_back(fold_total ? static_cast<double>(fold_correct) / fold_total : 0.0);
    }

    double mean = 0.0, best = -1.0;
    for (const auto& [gait, counts] : per_gait) {
      const double acc = counts.second ? static_cast<double>(counts.first) / counts.second : 0.0;
      row.per_gait_acc[gait] = acc;
      row.n_test += counts.second;
      mean += acc;
      if (acc > best) {
        best = acc;
        row.best_gait = gait;
      }
    }
    row.mean_acc = per_gait.empty() ? 0.0 : mean / static_cast<double>(per_gait.size());
    row.best_acc = best < 0.0 ? 0.0 : best;
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline std::string accuracy_report_to_csv(const AccuracyReport& report,
                                          const std::string& comment = "") {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += "mode,history_n,mean_acc,best_acc,best_gait,n_test\n";
  char buf[64];
  for (const auto& row : report.rows) {
    out += row.mode;
    out += "," + std::to_string(row.history_n);
    std::snprintf(buf, sizeof(buf), ",%.4f,%.4f", row.mean_acc, row.best_acc);
    out += buf;
    out += "," + row.best_gait;
    out += "," + std::to_string(row.n_test);
    out += "\n";
  }
  return out;
}

}  // namespace smflow
