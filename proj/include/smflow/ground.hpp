#pragma once

#include <string>
#include <string_view>

#include "smflow/error.hpp"

namespace smflow {

// Ground model: friction scales contact forces, roughness adds
// high-frequency perturbation to the knee and pressure channels.
struct Ground {
  std::string name;
  double friction_mu = 0.5;
  double roughness_sigma = 0.0;

  void validate() const {
    if (!(friction_mu > 0.0)) raise(Errc::InvalidConfig, "friction_mu must be positive");
    if (roughness_sigma < 0.0) raise(Errc::InvalidConfig, "roughness_sigma must be >= 0");
  }
};

// Presets ordered by friction: foil < styrofoam < rubber. Rougher grounds
// resist the movement more, so they also perturb the trajectories more.
inline Ground make_ground(std::string_view name) {
  if (name == "foil") return Ground{"foil", 0.4, 0.006};
  if (name == "styrofoam") return Ground{"styrofoam", 0.5, 0.009};
  if (name == "rubber") return Ground{"rubber", 0.6, 0.0135};
  raise(Errc::UnknownGround, "no ground named '" + std::string(name) + "'");
}

}  // namespace smflow
