#pragma once

#include <cstdint>

#include "flexsched/types.hpp"

namespace flexsched {

// Parameters for random instances patterned on daily EV charging aggregation:
// durations and powers uniform, availability windows drawn as duration plus a
// uniform slack, optional renewable target scaled to a fraction of the total
// job energy.
struct SyntheticConfig {
  int num_jobs = 100;
  int horizon = 24;
  int duration_min = 1;
  int duration_max = 4;
  double power_min = 1.0;
  double power_max = 6.6;
  int window_slack_max = 8;  // window length = duration + U{0..slack}
  ShapeKind shape = ShapeKind::Rectangular;
  CostKind cost_kind = CostKind::QuadraticTracking;
  double renewable_fraction = 0.70;  // <= 0 disables the renewable target
};

// Deterministic for a fixed seed (bit-identical instances).
Instance generate_synthetic(const SyntheticConfig& config, uint64_t seed);

// N*T unit-power single-slot jobs with full-horizon windows and pure quadratic
// cost. The relaxation optimum is uniform 1/T with cost N^2*T, while rounding
// it directly concentrates mass and can cost up to N^2*T^2.
Instance generate_adversarial(int N, int T);

}  // namespace flexsched
