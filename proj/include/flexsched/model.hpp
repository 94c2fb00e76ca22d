#pragma once

#include <string>
#include <vector>

#include "flexsched/types.hpp"

namespace flexsched {

// Admissible start slots {arrival, ..., deadline - duration + 1}, ascending.
std::vector<int> admissible_starts(const Job& job, int horizon);

// Column `start` of the consumption dictionary P^(j): the length-T profile of
// the job when started at `start`. Throws InvalidArgument for an inadmissible
// start.
LoadProfile profile_column(const Job& job, int start, int horizon);

// L(t) = sum_j sum_t' P^(j)[t, t'] s_j(t'); linear in the schedule.
LoadProfile aggregate_load(const Instance& instance, const ScheduleMatrix& schedule);

// Phi(L) = sum_t phi_t(L(t)). Throws DomainViolation when L(t) leaves the
// declared cost domain.
double evaluate_cost(const Instance& instance, const LoadProfile& load);

// <prices, placed shape> for the job started at `start`; the price of the
// integral placement (beta_j(start)).
double placed_price(const Job& job, const std::vector<double>& prices, int start);

struct FeasibilityViolation {
  std::string kind;  // "row_sum" | "support" | "box" | "binarity" | "dimension"
  int job = -1;      // row index, -1 for matrix-level issues
  int slot = 0;
  double value = 0.0;
};

struct FeasibilityReport {
  std::vector<FeasibilityViolation> violations;
  bool feasible() const { return violations.empty(); }
  std::string summary() const;
};

// Checks Eq-style schedule constraints: row sums, window support, box bounds,
// and binarity when integral. Report-style, never throws.
FeasibilityReport check_feasibility(const Instance& instance,
                                    const ScheduleMatrix& schedule, bool integral);

}  // namespace flexsched
