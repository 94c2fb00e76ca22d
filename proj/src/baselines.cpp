#include "flexsched/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flexsched/model.hpp"

namespace flexsched {

namespace {

struct SearchContext {
  const Instance& instance;
  std::vector<int> order;                       // job rows, smallest branching first
  std::vector<std::vector<int>> starts;         // admissible starts per ordered job
  std::vector<std::vector<double>> max_extra;   // suffix max reachable load per slot
  std::vector<double> load;                     // partial load, index 0..T-1
  std::vector<int> chosen;                      // per ordered job
  std::vector<int> best;
  double best_cost = HUGE_VAL;
  long long nodes = 0;

  explicit SearchContext(const Instance& inst) : instance(inst) {}

  double lower_bound(size_t depth) const {
    const auto& extra = max_extra[depth];
    double lb = 0.0;
    for (int t = 1; t <= instance.horizon; ++t) {
      double lo = load[static_cast<size_t>(t - 1)];
      lb += instance.cost.slot_min_over(lo, lo + extra[static_cast<size_t>(t - 1)],
                                        instance.target(t), t);
    }
    return lb;
  }

  void place(int job_row, int start, double sign) {
    const Job& job = instance.jobs[static_cast<size_t>(job_row)];
    for (int i = 0; i < job.duration; ++i)
      load[static_cast<size_t>(start + i - 1)] +=
          sign * job.power_shape[static_cast<size_t>(i)];
  }

  void dfs(size_t depth) {
    ++nodes;
    if (depth == order.size()) {
      double cost = 0.0;
      for (int t = 1; t <= instance.horizon; ++t)
        cost += instance.cost.slot_cost(load[static_cast<size_t>(t - 1)],
                                        instance.target(t), t);
      if (cost < best_cost) {
        best_cost = cost;
        best = chosen;
      }
      return;
    }
    if (lower_bound(depth) >= best_cost - 1e-12 * (1.0 + std::abs(best_cost))) return;
    const int job_row = order[depth];
    for (int start : starts[depth]) {
      place(job_row, start, +1.0);
      chosen[depth] = start;
      dfs(depth + 1);
      place(job_row, start, -1.0);
    }
  }
};

}  // namespace

OracleResult brute_force_optimal(const Instance& instance, double budget) {
  instance.validate();
  const int J = instance.num_jobs();
  SearchContext ctx(instance);
  ctx.order.resize(static_cast<size_t>(J));
  std::iota(ctx.order.begin(), ctx.order.end(), 0);

  std::vector<std::vector<int>> all_starts(static_cast<size_t>(J));
  double tuple_count = 1.0;
  for (int j = 0; j < J; ++j) {
    all_starts[static_cast<size_t>(j)] =
        admissible_starts(instance.jobs[static_cast<size_t>(j)], instance.horizon);
    tuple_count *= static_cast<double>(all_starts[static_cast<size_t>(j)].size());
    if (tuple_count > budget)
      throw BudgetExceeded("brute force bound " + std::to_string(tuple_count) +
                               " exceeds budget " + std::to_string(budget),
                           tuple_count);
  }

  std::sort(ctx.order.begin(), ctx.order.end(), [&](int a, int b) {
    size_t na = all_starts[static_cast<size_t>(a)].size();
    size_t nb = all_starts[static_cast<size_t>(b)].size();
    return na != nb ? na < nb : a < b;
  });
  ctx.starts.reserve(static_cast<size_t>(J));
  for (int j : ctx.order) ctx.starts.push_back(all_starts[static_cast<size_t>(j)]);

  // suffix of per-slot maximum additional load from jobs at depth >= k
  ctx.max_extra.assign(static_cast<size_t>(J) + 1,
                       std::vector<double>(static_cast<size_t>(instance.horizon), 0.0));
  for (int k = J - 1; k >= 0; --k) {
    const Job& job = instance.jobs[static_cast<size_t>(ctx.order[static_cast<size_t>(k)])];
    auto& row = ctx.max_extra[static_cast<size_t>(k)];
    row = ctx.max_extra[static_cast<size_t>(k) + 1];
    std::vector<double> cover(static_cast<size_t>(instance.horizon), 0.0);
    for (int start : ctx.starts[static_cast<size_t>(k)])
      for (int i = 0; i < job.duration; ++i) {
        size_t u = static_cast<size_t>(start + i - 1);
        cover[u] = std::max(cover[u], job.power_shape[static_cast<size_t>(i)]);
      }
    for (int t = 0; t < instance.horizon; ++t) row[static_cast<size_t>(t)] +=
        cover[static_cast<size_t>(t)];
  }

  ctx.load.assign(static_cast<size_t>(instance.horizon), 0.0);
  ctx.chosen.assign(static_cast<size_t>(J), 0);
  ctx.dfs(0);

  OracleResult result;
  result.optimal_cost = ctx.best_cost;
  result.nodes_explored = ctx.nodes;
  result.optimal_starts.assign(static_cast<size_t>(J), 0);
  for (size_t k = 0; k < ctx.order.size(); ++k)
    result.optimal_starts[static_cast<size_t>(ctx.order[k])] = ctx.best[k];
  return result;
}

ScheduleMatrix greedy_schedule(const Instance& instance, GreedyOrder order) {
  instance.validate();
  const int J = instance.num_jobs();
  std::vector<int> sequence(static_cast<size_t>(J));
  std::iota(sequence.begin(), sequence.end(), 0);
  if (order == GreedyOrder::ByArrival) {
    std::stable_sort(sequence.begin(), sequence.end(), [&](int a, int b) {
      return instance.jobs[static_cast<size_t>(a)].arrival <
             instance.jobs[static_cast<size_t>(b)].arrival;
    });
  } else if (order == GreedyOrder::BySlack) {
    auto slack = [&](int j) {
      const Job& job = instance.jobs[static_cast<size_t>(j)];
      return job.latest_start() - job.arrival;
    };
    std::stable_sort(sequence.begin(), sequence.end(),
                     [&](int a, int b) { return slack(a) < slack(b); });
  }

  ScheduleMatrix s = ScheduleMatrix::zeros(J, instance.horizon);
  std::vector<double> load(static_cast<size_t>(instance.horizon), 0.0);
  for (int j : sequence) {
    const Job& job = instance.jobs[static_cast<size_t>(j)];
    double best_delta = HUGE_VAL;
    int best_start = 0;
    for (int start : admissible_starts(job, instance.horizon)) {
      double delta = 0.0;
      for (int i = 0; i < job.duration; ++i) {
        int t = start + i;
        double before = load[static_cast<size_t>(t - 1)];
        double after = before + job.power_shape[static_cast<size_t>(i)];
        delta += instance.cost.slot_cost(after, instance.target(t), t) -
                 instance.cost.slot_cost(before, instance.target(t), t);
      }
      if (delta < best_delta) {
        best_delta = delta;
        best_start = start;
      }
    }
    s.at(j, best_start) = 1.0;
    for (int i = 0; i < job.duration; ++i)
      load[static_cast<size_t>(best_start + i - 1)] +=
          job.power_shape[static_cast<size_t>(i)];
  }
  return s;
}

ScheduleMatrix relax_round_no_adjust(const Instance& instance,
                                     const SolverConfig& solver_config,
                                     const RoundingConfig& rounding_config) {
  RelaxSolution relax = solve_relaxation(instance, solver_config);
  relax.schedule.snap();
  return round_schedule(relax.schedule, rounding_config);
}

}  // namespace flexsched
