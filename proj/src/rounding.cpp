#include "flexsched/rounding.hpp"

#include <cmath>

#include "flexsched/errors.hpp"
#include "flexsched/rng.hpp"

namespace flexsched {

ScheduleMatrix round_schedule(const ScheduleMatrix& schedule,
                              const RoundingConfig& config) {
  ScheduleMatrix out =
      ScheduleMatrix::zeros(schedule.num_jobs, schedule.horizon,
                            schedule.integrality_tolerance);
  RngStream rounding_rng = RngStream(config.seed).fork("rounding");
  const double eps = schedule.integrality_tolerance;

  for (int j = 0; j < schedule.num_jobs; ++j) {
    double row_sum = 0.0;
    for (int t = 1; t <= schedule.horizon; ++t) row_sum += schedule.at(j, t);
    if (std::abs(row_sum - 1.0) > 1e-6)
      throw InvalidArgument("round_schedule: row " + std::to_string(j) +
                            " sums to " + std::to_string(row_sum));

    int chosen = 0;
    if (config.mode == RoundingMode::MaxProbability) {
      double best = -1.0;
      for (int t = 1; t <= schedule.horizon; ++t) {
        double v = schedule.at(j, t);
        if (v > eps && v > best) {
          best = v;
          chosen = t;
        }
      }
    } else {
      const double u =
          rounding_rng.fork(static_cast<uint64_t>(j)).uniform() * row_sum;
      double cum = 0.0;
      for (int t = 1; t <= schedule.horizon; ++t) {
        double v = schedule.at(j, t);
        if (v <= eps) continue;
        cum += v;
        chosen = t;
        if (cum >= u) break;
      }
    }
    if (chosen == 0)
      throw InvalidArgument("round_schedule: row " + std::to_string(j) +
                            " has no supported start");
    out.at(j, chosen) = 1.0;
  }
  return out;
}

}  // namespace flexsched
