#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "smflow/channels.hpp"
#include "smflow/error.hpp"
#include "smflow/rng.hpp"

namespace smflow {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class GaitMode { Sinusoid, RandomBabble };
enum class TurnDirection { None, Left, Right };

struct LegGait {
  double amplitude = 0.0;   // rad
  double frequency = 1.0;   // Hz
  double phase = 0.0;       // rad
  double offset = 0.0;      // rad
  double duty_cycle = 0.6;  // fraction of the period spent in stance
};

struct GaitSpec {
  std::string name;
  GaitMode mode = GaitMode::Sinusoid;
  std::array<LegGait, kNumLegs> legs{};
  double babble_hold_s = 0.25;  // RandomBabble: targets resample every hold
  TurnDirection turn = TurnDirection::None;
  // How the stance window responds to friction: +1 for gaits that drag the
  // foot (grip holds it down longer), -1 for bouncing gaits (grip gives a
  // cleaner push-off and a shorter contact).
  double stance_grip = 1.0;

  void validate() const {
    for (const LegGait& leg : legs) {
      if (leg.amplitude < 0.0) raise(Errc::InvalidConfig, "gait amplitude must be >= 0");
      if (!(leg.duty_cycle > 0.0 && leg.duty_cycle < 1.0)) {
        raise(Errc::InvalidConfig, "duty_cycle must lie in (0, 1)");
      }
      if (mode == GaitMode::Sinusoid && !(leg.frequency > 0.0)) {
        raise(Errc::InvalidConfig, "sinusoid frequency must be positive");
      }
    }
    if (mode == GaitMode::RandomBabble && !(babble_hold_s > 0.0)) {
      raise(Errc::InvalidConfig, "babble hold must be positive");
    }
  }
};

// The four built-in motor regimes.
//
//   babble      random piecewise-constant targets, held 0.25 s, all legs
//   turn-left   forward push dominated by the hind-right leg (2x amplitude)
//   bound-right front pair and hind pair each move in phase, the pairs half a
//               period apart; left side slightly weaker so the robot veers
//               right (no aerial phase at these amplitudes)
//   stand       all amplitudes zero
inline GaitSpec make_gait(std::string_view name) {
  GaitSpec g;
  g.name = std::string(name);
  if (name == "babble") {
    g.mode = GaitMode::RandomBabble;
    for (auto& leg : g.legs) leg = LegGait{0.6, 1.0, 0.0, 0.0, 0.6};
    return g;
  }
  if (name == "turn-left") {
    // Three legs trot at the base rate; the hind-right leg pushes at double
    // amplitude and its own faster rhythm, which is what turns the robot.
    const double pi = kTwoPi / 2.0;
    g.legs[static_cast<int>(Leg::FL)] = LegGait{0.35, 0.9, 0.0, 0.0, 0.6};
    g.legs[static_cast<int>(Leg::FR)] = LegGait{0.35, 0.9, pi, 0.0, 0.6};
    g.legs[static_cast<int>(Leg::HL)] = LegGait{0.35, 0.9, pi, 0.0, 0.6};
    g.legs[static_cast<int>(Leg::HR)] = LegGait{0.70, 1.2413, 0.0, 0.0, 0.6};
    g.turn = TurnDirection::Left;
    g.stance_grip = 0.8;  // dragging trot: grip holds the feet down
    return g;
  }
  if (name == "bound-right") {
    const double pi = kTwoPi / 2.0;
    g.legs[static_cast<int>(Leg::FL)] = LegGait{0.45, 1.4, 0.0, 0.0, 0.6};
    g.legs[static_cast<int>(Leg::FR)] = LegGait{0.50, 1.4, 0.0, 0.0, 0.6};
    g.legs[static_cast<int>(Leg::HL)] = LegGait{0.45, 1.4, pi, 0.0, 0.6};
    g.legs[static_cast<int>(Leg::HR)] = LegGait{0.50, 1.4, pi, 0.0, 0.6};
    g.turn = TurnDirection::Right;
    g.stance_grip = 1.0;  // no aerial phase at these speeds; grip holds the pairs down
    return g;
  }
  if (name == "stand") {
    for (auto& leg : g.legs) leg = LegGait{0.0, 1.0, 0.0, 0.0, 0.6};
    return g;
  }
  raise(Errc::UnknownGait, "no gait named '" + std::string(name) + "'");
}

// Servo targets at time t. Sinusoid legs follow their own phase; babble holds
// a uniform draw in [-amplitude, amplitude] for babble_hold_s, resampled from
// an interval-indexed substream so the value at any t is seed-determined
// without replaying the sequence.
inline std::array<double, kNumLegs> motor_targets(const GaitSpec& gait, double t,
                                                  std::uint64_t seed) {
  std::array<double, kNumLegs> targets{};
  if (gait.mode == GaitMode::Sinusoid) {
    for (int l = 0; l < kNumLegs; ++l) {
      const LegGait& leg = gait.legs[l];
      targets[l] = leg.offset + leg.amplitude * std::sin(kTwoPi * leg.frequency * t + leg.phase);
    }
    return targets;
  }
  const auto interval = static_cast<std::uint64_t>(std::floor(t / gait.babble_hold_s));
  Rng rng = Rng::substream(seed, "gait/babble/" + std::to_string(interval));
  for (int l = 0; l < kNumLegs; ++l) {
    const double amp = gait.legs[l].amplitude;
    targets[l] = rng.uniform(-amp, amp);
  }
  return targets;
}

}  // namespace smflow
