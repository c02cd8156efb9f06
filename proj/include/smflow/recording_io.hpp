#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "smflow/io_util.hpp"
#include "smflow/recording.hpp"
#include "smflow/text.hpp"

namespace smflow {

// Recording CSV layout:
//   t,FL_motor,FL_hip,FL_knee,FL_pressure,FR_motor,...,HR_pressure
// one data row per sample, t in seconds. Values are shortest round-trip
// decimals, so load(save(r)) is bit-identical to r.
//
// Metadata travels in a JSON sidecar next to the CSV with the .meta.json
// extension. Extra keys in the sidecar (config hash, tool version) are
// tolerated on load.

inline std::filesystem::path meta_path_for(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  if (p.extension() == ".csv") p.replace_extension();
  p += ".meta.json";
  return p;
}

inline std::string recording_csv_header() {
  std::string header = "t";
  for (const ChannelId& id : canonical_channels()) {
    header += ",";
    header += id.name();
  }
  return header;
}

inline std::string to_csv(const Recording& rec) {
  std::string out = recording_csv_header();
  out += "\n";
  const std::size_t rows = rec.rows();
  for (std::size_t r = 0; r < rows; ++r) {
    out += format_double(static_cast<double>(r) * rec.dt());
    for (int c = 0; c < kNumChannels; ++c) {
      out += ",";
      out += format_double(rec.column(c)[r]);
    }
    out += "\n";
  }
  return out;
}

inline nlohmann::ordered_json meta_to_json(const RecordingMeta& meta) {
  nlohmann::ordered_json j;
  j["gait"] = meta.gait;
  j["ground"] = meta.ground;
  j["seed"] = meta.seed;
  j["dt"] = meta.dt;
  j["duration_s"] = meta.duration_s;
  j["schema_version"] = meta.schema_version;
  return j;
}

inline RecordingMeta meta_from_json(const nlohmann::json& j) {
  RecordingMeta meta;
  try {
    meta.gait = j.at("gait").get<std::string>();
    meta.ground = j.at("ground").get<std::string>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.dt = j.at("dt").get<double>();
    meta.duration_s = j.at("duration_s").get<double>();
    meta.schema_version = j.at("schema_version").get<int>();
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::ParseError, std::string("bad metadata sidecar: ") + e.what());
  }
  return meta;
}

struct SidecarExtras {
  std::string config_hash;
  std::string tool_version;
};

inline void save_recording(const Recording& rec, const std::filesystem::path& csv_path,
                           const SidecarExtras* extras = nullptr) {
  write_file_atomic(csv_path, to_csv(rec));
  nlohmann::ordered_json j = meta_to_json(rec.meta());
  if (extras) {
    j["config_hash"] = extras->config_hash;
    j["tool_version"] = extras->tool_version;
  }
  write_file_atomic(meta_path_for(csv_path), j.dump(2) + "\n");
}

inline Recording parse_recording_csv(const std::string& csv_text, RecordingMeta meta) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) raise(Errc::ParseError, "empty recording CSV");
  if (std::string(trim(line)) != recording_csv_header()) {
    raise(Errc::ParseError, "unexpected recording CSV header");
  }
  std::vector<std::vector<double>> columns(kNumChannels);
  while (std::getline(in, line)) {
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    auto fields = split(sv, ',');
    if (fields.size() != static_cast<std::size_t>(kNumChannels) + 1) {
      raise(Errc::ParseError, "recording CSV row has " + std::to_string(fields.size()) + " fields");
    }
    for (int c = 0; c < kNumChannels; ++c) {
      columns[c].push_back(parse_double(fields[c + 1]));
    }
  }
  return build_recording(columns, meta.dt, std::move(meta));
}

inline Recording load_recording(const std::filesystem::path& csv_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(meta_path_for(csv_path)));
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::ParseError, std::string("bad metadata sidecar JSON: ") + e.what());
  }
  RecordingMeta meta = meta_from_json(j);
  if (!(meta.dt > 0.0)) raise(Errc::NonPositiveDt, "sidecar dt must be positive");
  return parse_recording_csv(read_file(csv_path), std::move(meta));
}

}  // namespace smflow
