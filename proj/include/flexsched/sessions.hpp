#pragma once

#include <string>
#include <vector>

#include "flexsched/types.hpp"

namespace flexsched {

// Charging-session CSV: header row, then per session
//   arrival,departure,completion,energy_kwh[,current_series]
// Timestamps are "YYYY-MM-DD HH:MM[:SS]", "HH:MM", or plain hours; the
// current series is a ';'-separated list of relative per-slot draws.
//
// Sessions discretize to 1-indexed slots of slot_hours each: the slot
// containing the arrival opens the window, the slot containing the departure
// closes it, and durations round up so delivered energy is never truncated.
// Sessions whose discretized window does not fit the horizon are skipped and
// counted.
struct SessionLoadResult {
  Instance instance;
  int rows_loaded = 0;
  int rows_skipped = 0;
  std::vector<std::string> warnings;
};

SessionLoadResult load_sessions_csv(const std::string& path, double slot_hours,
                                    int horizon);
SessionLoadResult parse_sessions_csv(const std::string& text, double slot_hours,
                                     int horizon);

}  // namespace flexsched
