#pragma once

#include <cstdint>
#include <vector>

#include "flexsched/rounding.hpp"
#include "flexsched/solver.hpp"
#include "flexsched/types.hpp"

namespace flexsched {

struct OracleResult {
  double optimal_cost = 0.0;
  std::vector<int> optimal_starts;  // per job row, 1-indexed slots
  long long nodes_explored = 0;
};

// Exact minimizer by depth-first enumeration over start tuples, jobs ordered
// by branching factor, with incremental loads and a convex lower bound for
// pruning. Throws BudgetExceeded when prod_j |T^S_j| > budget.
OracleResult brute_force_optimal(const Instance& instance, double budget = 1e7);

enum class GreedyOrder { ByIndex, ByArrival, BySlack };

// Jobs placed sequentially at the start with the smallest incremental cost,
// ties to the earliest slot.
ScheduleMatrix greedy_schedule(const Instance& instance,
                               GreedyOrder order = GreedyOrder::ByArrival);

// The RAR pipeline with the adjustment step skipped: solve the relaxation,
// round directly.
ScheduleMatrix relax_round_no_adjust(const Instance& instance,
                                     const SolverConfig& solver_config,
                                     const RoundingConfig& rounding_config);

}  // namespace flexsched
