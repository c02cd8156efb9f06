#pragma once

#include "smflow/error.hpp"
#include "smflow/symbols.hpp"

namespace smflow {

struct TeConfig {
  int bins = 5;
  int history_k = 1;
  int lag = 1;
  Discretization discretization = Discretization::EqualFrequency;

  void validate() const {
    if (bins < 2) raise(Errc::InvalidConfig, "bins must be >= 2");
    if (history_k < 1) raise(Errc::InvalidConfig, "history_k must be >= 1");
    if (lag < 1) raise(Errc::InvalidConfig, "lag must be >= 1");
  }
};

}  // namespace smflow
