#pragma once

#include <optional>
#include <string>

#include "flexsched/pipeline.hpp"
#include "flexsched/solver.hpp"
#include "flexsched/stochastic.hpp"
#include "flexsched/types.hpp"

namespace flexsched {

// Instance JSON: {horizon, cost:{kind, params, lipschitz, load_max},
// renewable:[...], jobs:[{id, arrival, deadline, duration, kind, shape:[...]}],
// stochastic:{renewable:{...}, cost:{kind}}}. The stochastic block is
// optional and carries the renewable model for the uncertainty-aware runs.
struct InstanceBundle {
  Instance instance;
  std::optional<RenewableModel> renewable_model;
};

std::string instance_to_json(const Instance& instance,
                             const std::optional<RenewableModel>& model = std::nullopt);
InstanceBundle instance_from_json(const std::string& text);

InstanceBundle load_instance_file(const std::string& path);
void save_instance_file(const std::string& path, const Instance& instance,
                        const std::optional<RenewableModel>& model = std::nullopt);

// Schedules serialize as sparse triplets [job, t, value] with values above
// the integrality tolerance.
std::string schedule_to_json(const ScheduleMatrix& schedule);
ScheduleMatrix schedule_from_json(const std::string& text);

std::string relax_solution_to_json(const RelaxSolution& solution);

std::string run_report_to_json(const RunReport& report);

}  // namespace flexsched
