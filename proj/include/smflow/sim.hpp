#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "smflow/channels.hpp"
#include "smflow/error.hpp"
#include "smflow/gait.hpp"
#include "smflow/ground.hpp"
#include "smflow/recording.hpp"
#include "smflow/rng.hpp"

namespace smflow {

// Surrogate dynamics of the quadruped. This is a phenomenological model, not
// rigid-body physics: each motor drives its own hip through a first-order
// servo, each knee is a passive spring-damper excited by the hip's motion and
// by ground contact, and the feet report load only during stance. The
// causal pathways (motor -> hip directly; motor -> knee/pressure indirectly;
// ground modulating knee bending, load distribution and smoothness) are what
// the flow analysis downstream is expected to recover.

struct LegState {
  double hip = 0.0;        // rad
  double hip_rate = 0.0;   // rad/s
  double knee = 0.0;       // rad, flexion >= 0
  double knee_rate = 0.0;  // rad/s
  bool in_stance = false;
};

struct RobotState {
  std::array<LegState, kNumLegs> legs{};
  double time = 0.0;
  double load_drift = 0.0;  // log-scale OU state shared by all legs
};

struct SimConfig {
  GaitSpec gait;
  Ground ground;
  double dt = 0.02;          // s
  double duration_s = 60.0;  // s
  std::uint64_t seed = 0;

  double servo_alpha = 0.2;     // first-order hip tracking gain per step
  double sensor_sigma = 0.002;  // hip process noise
  double pressure_noise = 0.003;

  // Passive knees: hind springs are softer, so hind knees respond more
  // strongly to the same drive.
  double knee_stiffness_front = 3000.0;
  double knee_stiffness_hind = 600.0;
  double knee_damping_front = 98.0;
  double knee_damping_hind = 44.0;
  double knee_max = 1.2;          // mechanical stop, rad
  double hip_drive_gain = 0.02;   // |hip accel| -> knee drive
  double contact_gain = 140.0;    // mu * |hip rate| -> knee drive during stance
  double contact_share_front = 0.1;   // hind legs carry most of the push-off
  double turn_knee_load = 0.0;    // optional: load the outer-side knees more in a turn

  // Grippier grounds hold the foot down longer each cycle and catch the
  // swinging foot earlier.
  double duty_mu_gain = 0.55;
  double babble_grip_gain = 0.12;

  // Rough ground also kicks the knee around mechanically (timing jitter, as
  // opposed to the measurement scrape below).
  double knee_process_rough = 12.0;

  // Slow drift of the effective ground load (posture settling, battery sag,
  // surface unevenness at body scale). Makes single epochs ambiguous between
  // neighboring grounds while longer histories average it away.
  double drift_sigma = 0.9;   // stationary log-scale sd
  double drift_tau = 3.0;     // correlation time, s

  // Foot load model.
  double pressure_base = 0.4;
  double pressure_mu_gain = 0.05;     // higher friction -> slightly stronger push-off
  double flexion_pressure_gain = 2.5; // knee flexion modulates the load
  double posture_coeff = 8.0;         // lateral load shift per unit mu * gait bias

  double blowup_limit = 1e3;

  void validate() const {
    gait.validate();
    ground.validate();
    if (!(dt > 0.0)) raise(Errc::NonPositiveDt, "dt must be positive");
    if (!(duration_s >= 4.0)) {
      raise(Errc::InvalidConfig, "duration_s must cover at least two epochs (4 s)");
    }
    if (!(servo_alpha > 0.0 && servo_alpha < 2.0)) {
      raise(Errc::InvalidConfig, "servo_alpha must lie in (0, 2)");
    }
    if (!(knee_stiffness_hind < knee_stiffness_front)) {
      raise(Errc::InvalidConfig, "hind knee stiffness must be below front knee stiffness");
    }
    if (sensor_sigma < 0.0) raise(Errc::InvalidConfig, "sensor_sigma must be >= 0");
  }
};

// Stance is gait-phase-driven for periodic gaits (first duty_cycle fraction
// of each leg's own period). A zero-amplitude leg stands on the ground. For
// babble there is no phase, so contact follows leg extension: the foot is
// down while the hip angle is below a grip threshold that rises with
// friction (a grippy ground catches the swinging foot earlier). Grippier
// grounds also hold a cycling foot longer, stretching the stance window.
inline bool leg_in_stance(const GaitSpec& gait, int leg, double t, double hip_angle,
                          double duty_stretch, double grip_threshold) {
  const LegGait& lg = gait.legs[leg];
  if (gait.mode == GaitMode::RandomBabble) return hip_angle < grip_threshold;
  if (lg.amplitude == 0.0) return true;
  double cycles = lg.frequency * t + lg.phase / kTwoPi;
  double frac = cycles - std::floor(cycles);
  return frac < std::clamp(lg.duty_cycle * duty_stretch, 0.05, 0.95);
}

// Lateral asymmetry magnitude of the gait (how unevenly the two sides work).
inline double gait_lateral_bias(const GaitSpec& gait) {
  const double left = gait.legs[static_cast<int>(Leg::FL)].amplitude +
                      gait.legs[static_cast<int>(Leg::HL)].amplitude;
  const double right = gait.legs[static_cast<int>(Leg::FR)].amplitude +
                       gait.legs[static_cast<int>(Leg::HR)].amplitude;
  const double sum = left + right;
  return sum > 0.0 ? std::fabs(right - left) / sum : 0.0;
}

// The outer side of the turn sweeps the longer arc; the inner side carries
// more of the body weight. A gait that does not turn has neither.
inline bool is_outer(Leg leg, TurnDirection turn) {
  if (turn == TurnDirection::Right) return is_left(leg);
  if (turn == TurnDirection::Left) return !is_left(leg);
  return false;
}

// One integration step. Advances the state by cfg.dt under the given motor
// targets and emits the 16-channel sample (motor, hip, knee, pressure per leg
// in canonical order). Noise draws come from `rng` in a fixed per-leg order.
inline std::array<double, kNumChannels> step(RobotState& state,
                                             const std::array<double, kNumLegs>& targets,
                                             const Ground& ground, const SimConfig& cfg,
                                             Rng& rng) {
  std::array<double, kNumChannels> sample{};
  const double t_next = state.time + cfg.dt;
  const double bias = gait_lateral_bias(cfg.gait);
  const TurnDirection turn = cfg.gait.turn;

  if (cfg.drift_sigma > 0.0 && cfg.drift_tau > 0.0) {
    const double rho = std::exp(-cfg.dt / cfg.drift_tau);
    state.load_drift = rho * state.load_drift +
                       cfg.drift_sigma * std::sqrt(1.0 - rho * rho) * rng.normal();
  }
  const double knee_drift = std::exp(0.5 * state.load_drift);
  const double pressure_drift = std::exp(state.load_drift);

  // Pass 1: hips and contact flags. Grippier grounds hold each foot down
  // for a larger fraction of its cycle.
  const double duty_stretch =
      1.0 + cfg.duty_mu_gain * cfg.gait.stance_grip * ground.friction_mu;
  std::array<double, kNumLegs> hip_rate_new{}, hip_accel{};
  int n_stance = 0;
  for (int l = 0; l < kNumLegs; ++l) {
    LegState& leg = state.legs[l];
    const double hip_new =
        leg.hip + cfg.servo_alpha * (targets[l] - leg.hip) + rng.normal(cfg.sensor_sigma);
    hip_rate_new[l] = (hip_new - leg.hip) / cfg.dt;
    hip_accel[l] = (hip_rate_new[l] - leg.hip_rate) / cfg.dt;
    if (std::fabs(hip_new) > cfg.blowup_limit || !std::isfinite(hip_new)) {
      raise(Errc::NumericalBlowup, "hip state left the sanity bounds; check the configuration");
    }
    leg.in_stance = leg_in_stance(cfg.gait, l, t_next, hip_new, duty_stretch,
                                  cfg.babble_grip_gain * ground.friction_mu);
    if (leg.in_stance) ++n_stance;
    leg.hip = hip_new;
  }

  // Pass 2: knees and foot loads. The stance legs split the body weight, so
  // how many feet are down at once (a function of gait phase structure and
  // the friction-stretched duty cycle) sets the per-foot load level.
  const double weight_share = n_stance > 0 ? 1.0 / n_stance : 0.0;
  for (int l = 0; l < kNumLegs; ++l) {
    LegState& leg = state.legs[l];
    const Leg leg_id = static_cast<Leg>(l);
    const bool stance = leg.in_stance;

    const double stiffness =
        is_front(leg_id) ? cfg.knee_stiffness_front : cfg.knee_stiffness_hind;
    const double damping = is_front(leg_id) ? cfg.knee_damping_front : cfg.knee_damping_hind;
    double drive = cfg.hip_drive_gain * std::fabs(hip_accel[l]);
    if (stance) {
      // The outer legs of a turn sweep the longer arc, so their knees take
      // more of the push-off load.
      const double side =
          turn == TurnDirection::None ? 0.0 : (is_outer(leg_id, turn) ? 1.0 : -1.0);
      const double outer_load = std::clamp(1.0 + side * cfg.turn_knee_load * bias, 0.0, 2.0);
      const double share = is_front(leg_id) ? cfg.contact_share_front : 1.0;
      drive += share * outer_load * knee_drift * cfg.contact_gain * ground.friction_mu *
               std::fabs(hip_rate_new[l]);
    }
    const double knee_acc = drive - stiffness * leg.knee - damping * leg.knee_rate;
    double knee_rate_next = leg.knee_rate + cfg.dt * knee_acc +
                            rng.normal(cfg.knee_process_rough * ground.roughness_sigma);
    double knee_new = leg.knee + cfg.dt * knee_rate_next;
    if (std::fabs(knee_rate_next) > cfg.blowup_limit || !std::isfinite(knee_rate_next)) {
      raise(Errc::NumericalBlowup,
            "knee integration left the sanity bounds; check the configuration");
    }
    if (knee_new < 0.0) {
      knee_new = 0.0;
      if (knee_rate_next < 0.0) knee_rate_next = 0.0;
    } else if (knee_new > cfg.knee_max) {
      knee_new = cfg.knee_max;
      if (knee_rate_next > 0.0) knee_rate_next = 0.0;
    }

    // Foot load: this leg's share of the body weight, shifted toward the
    // inner side of a turn (the more so the grippier the ground, since the
    // outer foot then meets the ground at a shallower angle), modulated by
    // knee flexion, scaled by friction.
    double pressure_raw = 0.0;
    if (stance) {
      const double pside =
          turn == TurnDirection::None ? 0.0 : (is_outer(leg_id, turn) ? -1.0 : 1.0);
      double share_factor = 1.0 + pside * cfg.posture_coeff * ground.friction_mu * bias;
      share_factor = std::clamp(share_factor, 0.0, 2.0);
      pressure_raw = weight_share * share_factor * pressure_drift *
                     (1.0 + cfg.flexion_pressure_gain * knee_new) *
                     (cfg.pressure_base + cfg.pressure_mu_gain * ground.friction_mu);
    }

    // Scraping perturbation: rough grounds shake a leg in proportion to how
    // hard it works the ground, so the same ground reads differently under
    // different gaits. Feet in the air pick up nothing.
    const double knee_scrape = ground.roughness_sigma * (1.0 + knee_new / 0.15);
    const double pressure_scrape =
        pressure_raw > 0.0 ? ground.roughness_sigma * (1.0 + pressure_raw / 0.3) : 0.0;
    const double knee_meas = knee_new + rng.normal(knee_scrape);
    double pressure_meas =
        pressure_raw + rng.normal(cfg.pressure_noise) + rng.normal(pressure_scrape);
    if (pressure_meas < 0.0) pressure_meas = 0.0;

    leg.hip_rate = hip_rate_new[l];
    leg.knee = knee_new;
    leg.knee_rate = knee_rate_next;

    const int base = l * kNumKinds;
    sample[base + static_cast<int>(ChannelKind::Motor)] = targets[l];
    sample[base + static_cast<int>(ChannelKind::Hip)] = leg.hip;
    sample[base + static_cast<int>(ChannelKind::Knee)] = knee_meas;
    sample[base + static_cast<int>(ChannelKind::Pressure)] = pressure_meas;
  }

  state.time = t_next;
  return sample;
}

// Full episode from the canonical rest state. Bit-exact reproducible from
// (cfg, cfg.seed).
inline Recording run_episode(const SimConfig& cfg) {
  cfg.validate();
  const auto rows = static_cast<std::size_t>(std::llround(cfg.duration_s / cfg.dt));
  RobotState state;
  Rng rng = Rng::substream(cfg.seed, "sim/episode");

  std::vector<std::vector<double>> columns(kNumChannels);
  for (auto& col : columns) col.reserve(rows);

  for (std::size_t i = 0; i < rows; ++i) {
    const double t = static_cast<double>(i) * cfg.dt;
    const auto targets = motor_targets(cfg.gait, t, cfg.seed);
    const auto sample = step(state, targets, cfg.ground, cfg, rng);
    for (int c = 0; c < kNumChannels; ++c) columns[c].push_back(sample[c]);
  }

  RecordingMeta meta;
  meta.gait = cfg.gait.name;
  meta.ground = cfg.ground.name;
  meta.seed = cfg.seed;
  return build_recording(columns, cfg.dt, std::move(meta));
}

}  // namespace smflow
