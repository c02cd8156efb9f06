#include <doctest.h>

#include <cmath>
#include <numeric>

#include "smflow/classify.hpp"
#include "smflow/recording_io.hpp"
#include "smflow/sim.hpp"

using namespace smflow;

namespace {

SimConfig base_config(const std::string& gait, const std::string& ground, std::uint64_t seed,
                      double duration_s = 10.0) {
  SimConfig cfg;
  cfg.gait = make_gait(gait);
  cfg.ground = make_ground(ground);
  cfg.duration_s = duration_s;
  cfg.seed = seed;
  return cfg;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("make_gait presets") {
  SUBCASE("turn-left: hind-right amplitude strictly greatest") {
    auto g = make_gait("turn-left");
    const double hr = g.legs[static_cast<int>(Leg::HR)].amplitude;
    for (Leg leg : {Leg::FL, Leg::FR, Leg::HL}) {
      CHECK(hr > g.legs[static_cast<int>(leg)].amplitude);
    }
  }
  SUBCASE("bound-right: pairs in phase, front and hind half a period apart") {
    auto g = make_gait("bound-right");
    const auto& legs = g.legs;
    CHECK(legs[static_cast<int>(Leg::FL)].phase == legs[static_cast<int>(Leg::FR)].phase);
    CHECK(legs[static_cast<int>(Leg::HL)].phase == legs[static_cast<int>(Leg::HR)].phase);
    const double diff = std::fabs(legs[static_cast<int>(Leg::HL)].phase -
                                  legs[static_cast<int>(Leg::FL)].phase);
    CHECK(diff == doctest::Approx(kTwoPi / 2.0));
    // left side slightly weaker
    CHECK(legs[static_cast<int>(Leg::FL)].amplitude < legs[static_cast<int>(Leg::FR)].amplitude);
  }
  SUBCASE("stand: constant motor targets at every time") {
    auto g = make_gait("stand");
    for (double t : {0.0, 0.1, 1.7, 42.0}) {
      auto targets = motor_targets(g, t, 3);
      for (double x : targets) CHECK(x == 0.0);
    }
  }
  SUBCASE("unknown gait raises") {
    try {
      make_gait("moonwalk");
      FAIL("expected UnknownGait");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::UnknownGait);
    }
  }
}

TEST_CASE("motor_targets: sinusoid at t=0 with zero phase returns the offset") {
  auto g = make_gait("bound-right");
  for (auto& leg : g.legs) {
    leg.phase = 0.0;
    leg.offset = 0.17;
  }
  auto targets = motor_targets(g, 0.0, 1);
  for (double x : targets) CHECK(x == doctest::Approx(0.17));
}

TEST_CASE("babble targets hold for hold_s then change") {
  auto g = make_gait("babble");
  const std::uint64_t seed = 7;
  auto first = motor_targets(g, 0.0, seed);
  for (double t : {0.02, 0.1, 0.2, 0.249}) {
    CHECK(motor_targets(g, t, seed) == first);
  }
  auto second = motor_targets(g, 0.25, seed);
  CHECK(second != first);
  // deterministic random access: same t, same seed, same value
  CHECK(motor_targets(g, 0.13, seed) == first);
  // bounded by the babble amplitude
  for (double t = 0.0; t < 5.0; t += 0.26) {
    for (int l = 0; l < kNumLegs; ++l) {
      CHECK(std::fabs(motor_targets(g, t, seed)[l]) <= g.legs[l].amplitude);
    }
  }
}

TEST_CASE("step: rest with zero target and no contact is a fixed point") {
  SimConfig cfg = base_config("bound-right", "foil", 1);
  cfg.sensor_sigma = 0.0;
  cfg.pressure_noise = 0.0;
  cfg.ground.roughness_sigma = 0.0;
  // tiny amplitude, phase pushes t=0.02 into swing even with the
  // friction-stretched stance window
  for (auto& leg : cfg.gait.legs) {
    leg.amplitude = 1e-12;
    leg.phase = kTwoPi * 0.85;
  }
  RobotState state;
  Rng rng(1);
  auto sample = step(state, {0, 0, 0, 0}, cfg.ground, cfg, rng);
  for (int l = 0; l < kNumLegs; ++l) {
    CHECK(state.legs[l].in_stance == false);
    CHECK(sample[l * 4 + 1] == 0.0);  // hip
    CHECK(sample[l * 4 + 2] == 0.0);  // knee
    CHECK(sample[l * 4 + 3] == 0.0);  // pressure exactly zero in swing
  }
}

TEST_CASE("step: first-order hip update reaches alpha times the target") {
  SimConfig cfg = base_config("stand", "foil", 1);
  cfg.sensor_sigma = 0.0;
  cfg.ground.roughness_sigma = 0.0;
  cfg.servo_alpha = 0.2;
  RobotState state;
  Rng rng(1);
  auto sample = step(state, {1.0, 1.0, 1.0, 1.0}, cfg.ground, cfg, rng);
  for (int l = 0; l < kNumLegs; ++l) {
    CHECK(sample[l * 4 + 1] == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("run_episode shapes and determinism") {
  SimConfig cfg = base_config("bound-right", "rubber", 42, 10.0);
  Recording rec = run_episode(cfg);
  CHECK(rec.rows() == 500);
  CHECK(rec.meta().gait == "bound-right");
  CHECK(rec.meta().ground == "rubber");
  CHECK(rec.meta().seed == 42);

  Recording again = run_episode(cfg);
  CHECK(to_csv(rec) == to_csv(again));  // byte-identical serialization

  SimConfig other = cfg;
  other.seed = 43;
  CHECK(to_csv(run_episode(other)) != to_csv(rec));
}

TEST_CASE("stand gait with zero noise produces constant channels") {
  SimConfig cfg = base_config("stand", "rubber", 5, 6.0);
  cfg.sensor_sigma = 0.0;
  cfg.pressure_noise = 0.0;
  cfg.drift_sigma = 0.0;
  cfg.ground.roughness_sigma = 0.0;
  Recording rec = run_episode(cfg);
  for (int c = 0; c < kNumChannels; ++c) {
    const auto& col = rec.column(c);
    for (double v : col) CHECK(v == col[0]);
  }
}

TEST_CASE("knee angles stay inside the mechanical stops") {
  for (const char* gait : {"babble", "turn-left", "bound-right"}) {
    for (const char* ground : {"foil", "rubber"}) {
      SimConfig cfg = base_config(gait, ground, 11, 10.0);
      Recording rec = run_episode(cfg);
      for (Leg leg : kLegs) {
        const auto& knee = rec.column(ChannelId{leg, ChannelKind::Knee});
        // measurement scrape scales with engagement, up to (1 + max/0.15)
        const double allow = 6.0 * cfg.ground.roughness_sigma * (1.0 + cfg.knee_max / 0.15);
        for (double v : knee) {
          CHECK(v >= -allow);
          CHECK(v <= cfg.knee_max + allow);
        }
      }
    }
  }
}

TEST_CASE("pressure is nonnegative everywhere") {
  SimConfig cfg = base_config("bound-right", "rubber", 3, 10.0);
  Recording rec = run_episode(cfg);
  for (Leg leg : kLegs) {
    for (double v : rec.column(ChannelId{leg, ChannelKind::Pressure})) CHECK(v >= 0.0);
  }
}

TEST_CASE("hind knees flex more on rubber than on foil under bound-right") {
  int larger = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    auto on_rubber = run_episode(base_config("bound-right", "rubber", 100 + s, 10.0));
    auto on_foil = run_episode(base_config("bound-right", "foil", 100 + s, 10.0));
    double flex_rubber = 0.0, flex_foil = 0.0;
    for (Leg leg : {Leg::HL, Leg::HR}) {
      flex_rubber += mean(on_rubber.column(ChannelId{leg, ChannelKind::Knee}));
      flex_foil += mean(on_foil.column(ChannelId{leg, ChannelKind::Knee}));
    }
    if (flex_rubber > flex_foil) ++larger;
  }
  CHECK(larger == seeds);
}

TEST_CASE("total pressure impulse is non-decreasing in friction") {
  // same gait and seed, friction swept with roughness held fixed
  for (int s = 0; s < 5; ++s) {
    double previous = -1.0;
    for (double mu : {0.2, 0.5, 0.8}) {
      SimConfig cfg = base_config("bound-right", "foil", 200 + s, 10.0);
      cfg.ground = Ground{"custom", mu, 0.0};
      cfg.sensor_sigma = 0.0;
      cfg.pressure_noise = 0.0;
      cfg.drift_sigma = 0.0;
      Recording rec = run_episode(cfg);
      double impulse = 0.0;
      for (Leg leg : kLegs) {
        for (double v : rec.column(ChannelId{leg, ChannelKind::Pressure})) impulse += v;
      }
      CHECK(impulse >= previous);
      previous = impulse;
    }
  }
}

TEST_CASE("second-difference energy grows with roughness") {
  for (int s = 0; s < 5; ++s) {
    double previous = -1.0;
    for (double sigma : {0.0, 0.004, 0.012, 0.03}) {
      SimConfig cfg = base_config("bound-right", "foil", 300 + s, 10.0);
      cfg.ground = Ground{"custom", 0.5, sigma};
      Recording rec = run_episode(cfg);
      double energy = 0.0;
      for (Leg leg : kLegs) {
        const auto& knee = rec.column(ChannelId{leg, ChannelKind::Knee});
        for (std::size_t t = 2; t < knee.size(); ++t) {
          const double dd = knee[t] - 2.0 * knee[t - 1] + knee[t - 2];
          energy += dd * dd;
        }
      }
      CHECK(energy > previous);
      previous = energy;
    }
  }
}

TEST_CASE("numerical blowup is reported, not silently produced") {
  SimConfig cfg = base_config("bound-right", "foil", 1, 4.0);
  cfg.knee_stiffness_front = 1e9;  // unstable integration
  cfg.knee_stiffness_hind = 9e8;
  try {
    run_episode(cfg);
    FAIL("expected NumericalBlowup");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NumericalBlowup);
  }
}

TEST_CASE("simconfig validation") {
  SimConfig cfg = base_config("bound-right", "foil", 1, 2.0);  // too short
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = base_config("bound-right", "foil", 1);
  cfg.knee_stiffness_hind = cfg.knee_stiffness_front;  // must be softer
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("causal structure: with zero noise each hip and knee follows only its own motor") {
  // two zero-noise episodes differing only in the hind-right amplitude:
  // channels of the other legs must be bit-identical
  auto make = [](double hr_amp) {
    SimConfig cfg = base_config("bound-right", "foil", 1, 6.0);
    cfg.sensor_sigma = 0.0;
    cfg.pressure_noise = 0.0;
    cfg.drift_sigma = 0.0;
    cfg.ground.roughness_sigma = 0.0;
    cfg.knee_process_rough = 0.0;
    cfg.gait.legs[static_cast<int>(Leg::HR)].amplitude = hr_amp;
    return run_episode(cfg);
  };
  Recording base = make(0.50);
  Recording changed = make(0.65);
  for (Leg leg : {Leg::FL, Leg::FR, Leg::HL}) {
    for (ChannelKind kind : {ChannelKind::Motor, ChannelKind::Hip, ChannelKind::Knee}) {
      const auto& a = base.column(ChannelId{leg, kind});
      const auto& b = changed.column(ChannelId{leg, kind});
      CHECK(a == b);
    }
  }
  // the perturbed leg itself must respond
  CHECK(base.column(ChannelId{Leg::HR, ChannelKind::Hip}) !=
        changed.column(ChannelId{Leg::HR, ChannelKind::Hip}));
}

TEST_CASE("epoch-based feature overload matches the index-based one on aligned windows") {
  SimConfig cfg = base_config("bound-right", "foil", 4, 10.0);
  Recording rec = run_episode(cfg);
  // one-recording corpus only to fit boundaries
  Corpus corpus = Corpus::build({rec, rec}, 100, 2, 1);
  std::vector<std::size_t> all = {0, 1};
  auto fb = fit_feature_bins(corpus, all, 5);
  auto epochs = slice_epochs(corpus.episodes()[0], 100, 100);
  auto via_epoch = epoch_features(epochs[2], fb, 2);
  auto via_index = epoch_features(corpus.episodes()[0], fb, 100, 2, 2);
  CHECK(via_epoch == via_index);
  Epoch tail = epochs.back();
  CHECK_THROWS_AS(epoch_features(tail, fb, 3), Error);
}
