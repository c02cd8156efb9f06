#pragma once

#include <array>
#include <string>
#include <string_view>

#include "smflow/error.hpp"

namespace smflow {

// The robot exposes 16 channels: per leg one motor command, one hip encoder,
// one knee encoder and one foot pressure sensor.

enum class Leg : int { FL = 0, FR = 1, HL = 2, HR = 3 };
enum class ChannelKind : int { Motor = 0, Hip = 1, Knee = 2, Pressure = 3 };

inline constexpr int kNumLegs = 4;
inline constexpr int kNumKinds = 4;
inline constexpr int kNumChannels = kNumLegs * kNumKinds;

inline constexpr std::array<Leg, kNumLegs> kLegs = {Leg::FL, Leg::FR, Leg::HL, Leg::HR};

inline constexpr const char* leg_name(Leg leg) {
  switch (leg) {
    case Leg::FL: return "FL";
    case Leg::FR: return "FR";
    case Leg::HL: return "HL";
    case Leg::HR: return "HR";
  }
  return "??";
}

inline constexpr const char* kind_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Motor: return "motor";
    case ChannelKind::Hip: return "hip";
    case ChannelKind::Knee: return "knee";
    case ChannelKind::Pressure: return "pressure";
  }
  return "??";
}

inline constexpr bool is_front(Leg leg) { return leg == Leg::FL || leg == Leg::FR; }
inline constexpr bool is_left(Leg leg) { return leg == Leg::FL || leg == Leg::HL; }

struct ChannelId {
  Leg leg;
  ChannelKind kind;

  // Canonical order: legs FL, FR, HL, HR; within a leg motor, hip, knee,
  // pressure. All tables, CSV columns and flow matrices use this order.
  constexpr int index() const { return static_cast<int>(leg) * kNumKinds + static_cast<int>(kind); }

  std::string name() const { return std::string(leg_name(leg)) + "_" + kind_name(kind); }

  constexpr auto operator<=>(const ChannelId&) const = default;
};

inline constexpr ChannelId channel_at(int index) {
  return ChannelId{static_cast<Leg>(index / kNumKinds), static_cast<ChannelKind>(index % kNumKinds)};
}

inline constexpr std::array<ChannelId, kNumChannels> canonical_channels() {
  std::array<ChannelId, kNumChannels> out{};
  for (int i = 0; i < kNumChannels; ++i) out[i] = channel_at(i);
  return out;
}

inline ChannelId parse_channel(std::string_view name) {
  for (int i = 0; i < kNumChannels; ++i) {
    ChannelId id = channel_at(i);
    if (id.name() == name) return id;
  }
  raise(Errc::UnknownChannel, "no channel named '" + std::string(name) + "'");
}

}  // namespace smflow
