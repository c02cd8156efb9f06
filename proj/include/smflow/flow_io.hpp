#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "smflow/flow.hpp"
#include "smflow/text.hpp"

namespace smflow {

// FlowMatrix CSV: a 17x17 table. First row and first column carry channel
// names; the diagonal prints NA. Optional leading '#' comment lines carry
// provenance and are skipped on load.
inline std::string flow_matrix_to_csv(const FlowMatrix& fm, const std::string& comment = "") {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  for (const ChannelId& id : canonical_channels()) {
    out += ",";
    out += id.name();
  }
  out += "\n";
  for (int i = 0; i < kNumChannels; ++i) {
    out += channel_at(i).name();
    for (int j = 0; j < kNumChannels; ++j) {
      out += ",";
      out += (i == j) ? "NA" : format_double(fm.te[i][j]);
    }
    out += "\n";
  }
  return out;
}

inline FlowMatrix flow_matrix_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  FlowMatrix fm;
  // skip comments
  do {
    if (!std::getline(in, line)) raise(Errc::ParseError, "empty flow matrix CSV");
  } while (!line.empty() && line[0] == '#');

  auto header = split(trim(line), ',');
  if (header.size() != kNumChannels + 1) {
    raise(Errc::ParseError, "flow matrix CSV header must have 17 fields");
  }
  for (int j = 0; j < kNumChannels; ++j) {
    if (std::string(header[j + 1]) != channel_at(j).name()) {
      raise(Errc::ParseError, "flow matrix CSV columns are not in canonical order");
    }
  }
  for (int i = 0; i < kNumChannels; ++i) {
    if (!std::getline(in, line)) raise(Errc::ParseError, "flow matrix CSV has too few rows");
    auto fields = split(trim(line), ',');
    if (fields.size() != kNumChannels + 1) {
      raise(Errc::ParseError, "flow matrix CSV row must have 17 fields");
    }
    if (std::string(fields[0]) != channel_at(i).name()) {
      raise(Errc::ParseError, "flow matrix CSV rows are not in canonical order");
    }
    for (int j = 0; j < kNumChannels; ++j) {
      fm.te[i][j] = (fields[j + 1] == "NA") ? std::numeric_limits<double>::quiet_NaN()
                                            : parse_double(fields[j + 1]);
    }
  }
  return fm;
}

struct DotStyle {
  double min_penwidth = 0.8;
  double max_penwidth = 4.0;
};

// Graphviz export. Always declares all 16 channel nodes; edge thickness and
// gray level scale linearly with bits over the range present in the list
// (a single flow gets max penwidth and the darkest gray). Output ordering is
// the input ordering, so the text is deterministic.
inline std::string export_dot(const std::vector<Flow>& flows, const DotStyle& style = {},
                              const std::string& comment = "") {
  double lo = 0.0, hi = 0.0;
  if (!flows.empty()) {
    lo = hi = flows[0].bits;
    for (const Flow& f : flows) {
      lo = std::min(lo, f.bits);
      hi = std::max(hi, f.bits);
    }
  }
  const double span = hi - lo;

  std::string out;
  if (!comment.empty()) out += "// " + comment + "\n";
  out += "digraph flows {\n";
  for (const ChannelId& id : canonical_channels()) {
    out += "  \"" + id.name() + "\";\n";
  }
  for (const Flow& f : flows) {
    const double unit = span > 0.0 ? (f.bits - lo) / span : 1.0;
    const double penwidth =
        style.min_penwidth + unit * (style.max_penwidth - style.min_penwidth);
    // gray0 is black; weaker flows fade toward gray70.
    const int gray = static_cast<int>(std::lround(70.0 * (1.0 - unit)));
    out += "  \"" + f.source.name() + "\" -> \"" + f.destination.name() + "\" [penwidth=" +
           format_fixed(penwidth, 2) + ", label=\"" + format_fixed(f.bits, 3) + "\", color=\"gray" +
           std::to_string(gray) + "\"";
    if (f.significant) out += ", style=bold";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace smflow
