#pragma once

#include <compare>
#include <optional>
#include <utility>
#include <vector>

#include "flexsched/types.hpp"

namespace flexsched {

// Edge (t', t, j): t' is job j's first fractional slot, t another fractional
// slot of the same job. Edges of one job form a star rooted at t'.
struct EdgeKey {
  int from = 0;  // t'
  int to = 0;    // t
  int job = 0;   // row index
  auto operator<=>(const EdgeKey&) const = default;
};

// Per-duration multigraph G_d(s) over time slots.
struct DurationMultigraph {
  int duration = 0;
  int horizon = 0;
  std::vector<EdgeKey> edges;
};

struct OrientedEdge {
  EdgeKey edge;
  bool forward = true;  // traversed from -> to; backward swaps decrease/increase roles
};

// G_d(s) for the jobs of the given duration.
DurationMultigraph build_duration_graph(const Instance& instance,
                                        const ScheduleMatrix& schedule, int duration);

// Depth-first cycle search: roots ascending, incident edges ordered by
// (t', t, j). Consecutive edges of the result share a node; parallel edges
// form 2-cycles. Returns nothing when the multigraph is a forest.
std::optional<std::vector<OrientedEdge>> find_cycle(const DurationMultigraph& graph);

struct AdjustStep {
  int duration = 0;              // cycle cancellation: graph duration
  int pair_t = 0, pair_t2 = 0;   // pair update: the (t, t~) pair
  std::vector<int> jobs;         // participating job rows, traversal order
  std::vector<double> xi;        // pair update: normalized null vector
  double delta = 0.0;            // Delta* applied
  std::vector<std::pair<int, int>> integralized;  // (job, slot) snapped to {0,1}
  double load_deviation = 0.0;   // inf-norm of the aggregate-load change
};

struct AdjustReport {
  int fractional_before = 0;
  int fractional_after = 0;
  int steps = 0;  // cycles cancelled / pair updates applied
  double max_load_deviation = 0.0;
  std::vector<AdjustStep> trace;
};

struct AdjustOptions {
  int max_steps = -1;  // < 0: run to termination
  bool record_trace = true;
};

// Lossless adjustment for rectangular loads: cancels cycles of G_d(s) per
// duration (ascending) until every multigraph is a forest. Preserves the
// aggregate load and relaxation feasibility; at most 2*d_max*T fractional
// entries remain.
std::pair<ScheduleMatrix, AdjustReport> adjust_rectangular(
    const Instance& instance, ScheduleMatrix schedule, const AdjustOptions& opts = {});

// Lossless adjustment for arbitrary load shapes: whenever D = d_max + 1 jobs
// are fractional at a slot pair, shifts mass along a null vector of their
// padded-shape matrix. At most d_max*T*(T-1) fractional entries remain.
std::pair<ScheduleMatrix, AdjustReport> adjust_realistic(
    const Instance& instance, ScheduleMatrix schedule, const AdjustOptions& opts = {});

// Nonzero xi with shapes * xi = 0 for a (D-1) x D matrix, by Gaussian
// elimination; normalized to inf-norm 1 with the first nonzero entry positive.
std::vector<double> null_vector(const std::vector<std::vector<double>>& shapes);

}  // namespace flexsched
