#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "smflow/error.hpp"
#include "smflow/io_util.hpp"
#include "smflow/rng.hpp"
#include "smflow/text.hpp"

namespace smflow {

// Experiment configuration file, TOML subset: [section] headers, key = value
// pairs, '#' comments, quoted strings, integers, floats, booleans and flat
// integer arrays. Unknown sections or keys are rejected rather than ignored
// so that a typo cannot silently fall back to a default.

struct TomlValue {
  std::string raw;

  std::string as_string() const {
    std::string_view s = trim(raw);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
      return std::string(s.substr(1, s.size() - 2));
    }
    return std::string(s);
  }
  double as_double() const { return parse_double(trim(raw)); }
  std::int64_t as_int() const {
    return static_cast<std::int64_t>(parse_double(trim(raw)));  // tolerate "5" and "5.0"
  }
  std::uint64_t as_u64() const { return parse_u64(trim(raw)); }
  bool as_bool() const {
    auto s = trim(raw);
    if (s == "true") return true;
    if (s == "false") return false;
    raise(Errc::ParseError, "expected true/false, got '" + std::string(s) + "'");
  }
  std::vector<int> as_int_array() const {
    std::string_view s = trim(raw);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
      raise(Errc::ParseError, "expected an array, got '" + std::string(s) + "'");
    }
    std::vector<int> out;
    for (auto field : split(s.substr(1, s.size() - 2), ',')) {
      auto t = trim(field);
      if (t.empty()) continue;
      out.push_back(static_cast<int>(parse_double(t)));
    }
    return out;
  }
};

using TomlTable = std::map<std::string, std::map<std::string, TomlValue>>;

inline TomlTable parse_toml(const std::string& text) {
  TomlTable table;
  std::string section;  // "" = top level
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line = trim(std::string_view(text).substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        raise(Errc::ParseError, "line " + std::to_string(line_no) + ": unterminated section");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      table[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      raise(Errc::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    // strip trailing comment outside quotes/brackets
    bool in_quotes = false;
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (value[i] == '"') in_quotes = !in_quotes;
      if (value[i] == '#' && !in_quotes) {
        value = trim(value.substr(0, i));
        break;
      }
    }
    if (key.empty() || value.empty()) {
      raise(Errc::ParseError, "line " + std::to_string(line_no) + ": empty key or value");
    }
    table[section][key] = TomlValue{std::string(value)};
  }
  return table;
}

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string out_dir = "out";

  struct Sim {
    std::string gait = "bound-right";
    std::string ground = "foil";
    double duration_s = 60.0;
    double dt = 0.02;
  } sim;

  struct Te {
    int bins = 5;
    int history_k = 1;
    int lag = 1;
    std::string discretization = "equal-frequency";
    int surrogates = 100;
    int top_flows = 12;
  } te;

  struct Classify {
    int episodes_per_cell = 20;
    double episode_s = 60.0;
    int folds = 5;
    std::vector<int> histories = {1, 2, 4, 8};
    int bins = 5;
  } classify;

  struct Tracking {
    int steps = 10000;
    double walk_sigma = 0.1;
    double gain = 0.8;
    int visual_bins = 5;
    int seeds = 20;
  } tracking;

  // Canonical serialization; the config hash recorded in every output file
  // is the FNV-1a of this text.
  std::string canonical() const {
    std::string s;
    s += "seed=" + std::to_string(seed) + "\n";
    s += "out_dir=" + out_dir + "\n";
    s += "sim.gait=" + sim.gait + "\n";
    s += "sim.ground=" + sim.ground + "\n";
    s += "sim.duration_s=" + format_double(sim.duration_s) + "\n";
    s += "sim.dt=" + format_double(sim.dt) + "\n";
    s += "te.bins=" + std::to_string(te.bins) + "\n";
    s += "te.history_k=" + std::to_string(te.history_k) + "\n";
    s += "te.lag=" + std::to_string(te.lag) + "\n";
    s += "te.discretization=" + te.discretization + "\n";
    s += "te.surrogates=" + std::to_string(te.surrogates) + "\n";
    s += "te.top_flows=" + std::to_string(te.top_flows) + "\n";
    s += "classify.episodes_per_cell=" + std::to_string(classify.episodes_per_cell) + "\n";
    s += "classify.episode_s=" + format_double(classify.episode_s) + "\n";
    s += "classify.folds=" + std::to_string(classify.folds) + "\n";
    s += "classify.histories=";
    for (int h : classify.histories) s += std::to_string(h) + ";";
    s += "\n";
    s += "classify.bins=" + std::to_string(classify.bins) + "\n";
    s += "tracking.steps=" + std::to_string(tracking.steps) + "\n";
    s += "tracking.walk_sigma=" + format_double(tracking.walk_sigma) + "\n";
    s += "tracking.gain=" + format_double(tracking.gain) + "\n";
    s += "tracking.visual_bins=" + std::to_string(tracking.visual_bins) + "\n";
    s += "tracking.seeds=" + std::to_string(tracking.seeds) + "\n";
    return s;
  }

  std::string hash() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical())));
    return std::string(buf);
  }
};

inline ExperimentConfig config_from_toml(const TomlTable& table) {
  ExperimentConfig cfg;
  for (const auto& [section, entries] : table) {
    for (const auto& [key, value] : entries) {
      const std::string where = section.empty() ? key : section + "." + key;
      if (section.empty()) {
        if (key == "seed") cfg.seed = value.as_u64();
        else if (key == "out_dir") cfg.out_dir = value.as_string();
        else raise(Errc::InvalidConfig, "unknown key '" + where + "'");
      } else if (section == "sim") {
        if (key == "gait") cfg.sim.gait = value.as_string();
        else if (key == "ground") cfg.sim.ground = value.as_string();
        else if (key == "duration_s") cfg.sim.duration_s = value.as_double();
        else if (key == "dt") cfg.sim.dt = value.as_double();
        else raise(Errc::InvalidConfig, "unknown key '" + where + "'");
      } else if (section == "te") {
        if (key == "bins") cfg.te.bins = static_cast<int>(value.as_int());
        else if (key == "history_k") cfg.te.history_k = static_cast<int>(value.as_int());
        else if (key == "lag") cfg.te.lag = static_cast<int>(value.as_int());
        else if (key == "discretization") cfg.te.discretization = value.as_string();
        else if (key == "surrogates") cfg.te.surrogates = static_cast<int>(value.as_int());
        else if (key == "top_flows") cfg.te.top_flows = static_cast<int>(value.as_int());
        else raise(Errc::InvalidConfig, "unknown key '" + where + "'");
      } else if (section == "classify") {
        if (key == "episodes_per_cell") cfg.classify.episodes_per_cell = static_cast<int>(value.as_int());
        else if (key == "episode_s") cfg.classify.episode_s = value.as_double();
        else if (key == "folds") cfg.classify.folds = static_cast<int>(value.as_int());
        else if (key == "histories") cfg.classify.histories = value.as_int_array();
        else if (key == "bins") cfg.classify.bins = static_cast<int>(value.as_int());
        else raise(Errc::InvalidConfig, "unknown key '" + where + "'");
      } else if (section == "tracking") {
        if (key == "steps") cfg.tracking.steps = static_cast<int>(value.as_int());
        else if (key == "walk_sigma") cfg.tracking.walk_sigma = value.as_double();
        else if (key == "gain") cfg.tracking.gain = value.as_double();
        else if (key == "visual_bins") cfg.tracking.visual_bins = static_cast<int>(value.as_int());
        else if (key == "seeds") cfg.tracking.seeds = static_cast<int>(value.as_int());
        else raise(Errc::InvalidConfig, "unknown key '" + where + "'");
      } else {
        raise(Errc::InvalidConfig, "unknown section '[" + section + "]'");
      }
    }
  }
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  return config_from_toml(parse_toml(read_file(path)));
}

}  // namespace smflow
