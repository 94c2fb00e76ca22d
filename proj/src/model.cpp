#include "flexsched/model.hpp"

#include <cmath>
#include <sstream>

namespace flexsched {

std::vector<int> admissible_starts(const Job& job, int horizon) {
  job.validate(horizon);
  std::vector<int> starts;
  starts.reserve(static_cast<size_t>(job.latest_start() - job.arrival + 1));
  for (int t = job.arrival; t <= job.latest_start(); ++t) starts.push_back(t);
  return starts;
}

LoadProfile profile_column(const Job& job, int start, int horizon) {
  if (start < job.arrival || start > job.latest_start())
    throw InvalidArgument("invalid start " + std::to_string(start) + " for job " +
                          std::to_string(job.id));
  LoadProfile profile(horizon);
  for (int i = 0; i < job.duration; ++i)
    profile.at(start + i) = job.power_shape[static_cast<size_t>(i)];
  return profile;
}

LoadProfile aggregate_load(const Instance& instance, const ScheduleMatrix& schedule) {
  if (schedule.num_jobs != instance.num_jobs() || schedule.horizon != instance.horizon)
    throw DimensionMismatch("schedule dimensions do not match instance");
  LoadProfile load(instance.horizon);
  for (int j = 0; j < schedule.num_jobs; ++j) {
    const Job& job = instance.jobs[static_cast<size_t>(j)];
    for (int t = 1; t <= schedule.horizon; ++t) {
      double w = schedule.at(j, t);
      if (w == 0.0) continue;
      const int last = std::min(schedule.horizon, t + job.duration - 1);
      for (int u = t; u <= last; ++u)
        load.at(u) += w * job.power_shape[static_cast<size_t>(u - t)];
    }
  }
  return load;
}

double evaluate_cost(const Instance& instance, const LoadProfile& load) {
  if (load.horizon() != instance.horizon)
    throw DimensionMismatch("load length does not match horizon");
  const double slack = 1e-6 * std::max(1.0, instance.cost.load_max);
  double total = 0.0;
  for (int t = 1; t <= instance.horizon; ++t) {
    double l = load.at(t);
    if (l < -slack || l > instance.cost.load_max + slack)
      throw DomainViolation("load " + std::to_string(l) + " at slot " +
                            std::to_string(t) + " outside cost domain [0, " +
                            std::to_string(instance.cost.load_max) + "]");
    total += instance.cost.slot_cost(l, instance.target(t), t);
  }
  return total;
}

double placed_price(const Job& job, const std::vector<double>& prices, int start) {
  if (start < 1 || start + job.duration - 1 > static_cast<int>(prices.size()))
    throw DimensionMismatch("placed_price: start window exceeds price vector");
  double total = 0.0;
  for (int i = 0; i < job.duration; ++i)
    total += prices[static_cast<size_t>(start + i - 1)] *
             job.power_shape[static_cast<size_t>(i)];
  return total;
}

std::string FeasibilityReport::summary() const {
  if (violations.empty()) return "feasible";
  std::ostringstream os;
  os << violations.size() << " violation(s):";
  size_t shown = 0;
  for (const auto& v : violations) {
    if (shown++ == 10) {
      os << " ...";
      break;
    }
    os << " [" << v.kind << " job=" << v.job << " t=" << v.slot << " v=" << v.value
       << "]";
  }
  return os.str();
}

FeasibilityReport check_feasibility(const Instance& instance,
                                    const ScheduleMatrix& schedule, bool integral) {
  FeasibilityReport report;
  if (schedule.num_jobs != instance.num_jobs() || schedule.horizon != instance.horizon) {
    report.violations.push_back({"dimension", -1, 0, 0.0});
    return report;
  }
  const double row_tol = 1e-9;
  const double eps = schedule.integrality_tolerance;
  for (int j = 0; j < schedule.num_jobs; ++j) {
    const Job& job = instance.jobs[static_cast<size_t>(j)];
    double row_sum = 0.0;
    for (int t = 1; t <= schedule.horizon; ++t) {
      double v = schedule.at(j, t);
      row_sum += v;
      if (v < -eps || v > 1.0 + eps)
        report.violations.push_back({"box", j, t, v});
      bool admissible = t >= job.arrival && t <= job.latest_start();
      if (!admissible && std::abs(v) > eps)
        report.violations.push_back({"support", j, t, v});
      if (integral && schedule.is_fractional(v))
        report.violations.push_back({"binarity", j, t, v});
    }
    if (std::abs(row_sum - 1.0) > row_tol)
      report.violations.push_back({"row_sum", j, 0, row_sum});
  }
  return report;
}

}  // namespace flexsched
