#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "smflow/channels.hpp"
#include "smflow/error.hpp"

namespace smflow {

struct RecordingMeta {
  std::string gait;
  std::string ground;
  std::uint64_t seed = 0;
  double dt = 0.0;
  double duration_s = 0.0;
  int schema_version = 1;

  bool operator==(const RecordingMeta&) const = default;
};

// A finite multichannel sensorimotor recording. Column-major: one vector per
// channel in canonical order, all the same length. Immutable once built.
class Recording {
 public:
  Recording(std::array<std::vector<double>, kNumChannels> columns, double dt, RecordingMeta meta)
      : columns_(std::move(columns)), dt_(dt), meta_(std::move(meta)) {}

  const std::vector<double>& column(ChannelId id) const { return columns_[id.index()]; }
  const std::vector<double>& column(int index) const { return columns_[index]; }

  std::size_t rows() const { return columns_[0].size(); }
  double dt() const { return dt_; }
  double duration_s() const { return static_cast<double>(rows()) * dt_; }
  const RecordingMeta& meta() const { return meta_; }

 private:
  std::array<std::vector<double>, kNumChannels> columns_;
  double dt_;
  RecordingMeta meta_;
};

// Assembles a Recording from 16 equal-length channel sequences given in
// canonical order. Stores metadata verbatim except duration_s, which is
// recomputed from the data.
inline Recording build_recording(const std::vector<std::vector<double>>& channel_data, double dt,
                                 RecordingMeta meta) {
  if (channel_data.size() != static_cast<std::size_t>(kNumChannels)) {
    raise(Errc::BadChannelCount,
          "expected 16 channels, got " + std::to_string(channel_data.size()));
  }
  if (!(dt > 0.0)) {
    raise(Errc::NonPositiveDt, "dt must be positive");
  }
  const std::size_t rows = channel_data[0].size();
  for (const auto& col : channel_data) {
    if (col.size() != rows) {
      raise(Errc::LengthMismatch, "channel lengths differ");
    }
  }
  if (rows < 2) {
    raise(Errc::TooFewSamples, "a recording needs at least 2 rows");
  }
  for (int i = 0; i < kNumChannels; ++i) {
    if (channel_at(i).kind != ChannelKind::Pressure) continue;
    for (double v : channel_data[i]) {
      if (v < 0.0) raise(Errc::InvalidConfig, "pressure channel " + channel_at(i).name() + " has negative samples");
    }
  }
  std::array<std::vector<double>, kNumChannels> columns;
  for (int i = 0; i < kNumChannels; ++i) columns[i] = channel_data[i];
  meta.dt = dt;
  meta.duration_s = static_cast<double>(rows) * dt;
  return Recording(std::move(columns), dt, std::move(meta));
}

// A fixed-length analysis window. The default of 100 samples is 2 seconds at
// the default 50 Hz loop rate.
inline constexpr std::size_t kDefaultEpochLen = 100;

struct Epoch {
  const Recording* source = nullptr;
  std::size_t start_index = 0;
  std::size_t length = kDefaultEpochLen;
  std::string label;  // ground
  std::string gait;
};

// Tiles a recording into epochs at start indices 0, stride, 2*stride, ...
// A trailing window that does not fit completely is discarded, never padded.
inline std::vector<Epoch> slice_epochs(const Recording& rec, std::size_t epoch_len,
                                       std::size_t stride) {
  if (epoch_len < 1 || stride < 1) {
    raise(Errc::InvalidConfig, "epoch_len and stride must be >= 1");
  }
  if (epoch_len > rec.rows()) {
    raise(Errc::EpochTooLong, "epoch_len " + std::to_string(epoch_len) + " exceeds recording rows " +
                                  std::to_string(rec.rows()));
  }
  std::vector<Epoch> epochs;
  for (std::size_t start = 0; start + epoch_len <= rec.rows(); start += stride) {
    epochs.push_back(Epoch{&rec, start, epoch_len, rec.meta().ground, rec.meta().gait});
  }
  return epochs;
}

}  // namespace smflow
