#pragma once

#include <cstdint>

#include "flexsched/types.hpp"

namespace flexsched {

enum class RoundingMode { Randomized, MaxProbability };

struct RoundingConfig {
  RoundingMode mode = RoundingMode::Randomized;
  uint64_t seed = 0;
};

// Converts a feasible fractional schedule into an integral one. Each job's
// start is drawn over its supported slots (inverse CDF in time order, one
// counter-based stream per (seed, job row)), so rounding one job never
// perturbs another job's draw. The chosen start always has positive input
// weight. MaxProbability picks the argmax, ties to the earliest slot.
ScheduleMatrix round_schedule(const ScheduleMatrix& schedule,
                              const RoundingConfig& config);

}  // namespace flexsched
