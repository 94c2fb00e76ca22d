#include "flexsched/adjust.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "flexsched/model.hpp"

namespace flexsched {

namespace {

using Adjacency = std::vector<std::set<EdgeKey>>;  // index 1..T

// Iterative undirected DFS. In an undirected traversal every non-tree edge
// closes a cycle with the current stack, so the search stops at the first
// such edge; roots and incident edges are visited in ascending order.
std::optional<std::vector<OrientedEdge>> dfs_find_cycle(const Adjacency& incident,
                                                        int horizon) {
  struct Frame {
    int node;
    std::set<EdgeKey>::const_iterator it;
    EdgeKey entry{};
    bool has_entry = false;
  };
  std::vector<char> visited(static_cast<size_t>(horizon) + 1, 0);
  std::vector<char> on_stack(static_cast<size_t>(horizon) + 1, 0);
  std::vector<int> stack_pos(static_cast<size_t>(horizon) + 1, -1);

  for (int root = 1; root <= horizon; ++root) {
    if (visited[static_cast<size_t>(root)] || incident[static_cast<size_t>(root)].empty())
      continue;
    std::vector<Frame> stack;
    stack.push_back({root, incident[static_cast<size_t>(root)].begin()});
    visited[static_cast<size_t>(root)] = 1;
    on_stack[static_cast<size_t>(root)] = 1;
    stack_pos[static_cast<size_t>(root)] = 0;

    while (!stack.empty()) {
      Frame& top = stack.back();
      const auto& edges = incident[static_cast<size_t>(top.node)];
      bool descended = false;
      while (top.it != edges.end()) {
        EdgeKey e = *top.it;
        ++top.it;
        if (top.has_entry && e == top.entry) continue;
        int other = e.from == top.node ? e.to : e.from;
        if (!visited[static_cast<size_t>(other)]) {
          visited[static_cast<size_t>(other)] = 1;
          on_stack[static_cast<size_t>(other)] = 1;
          stack_pos[static_cast<size_t>(other)] = static_cast<int>(stack.size());
          stack.push_back(
              {other, incident[static_cast<size_t>(other)].begin(), e, true});
          descended = true;
          break;
        }
        if (on_stack[static_cast<size_t>(other)]) {
          // cycle: stack path other -> ... -> top.node, then e back to other
          std::vector<OrientedEdge> cycle;
          for (size_t i = static_cast<size_t>(stack_pos[static_cast<size_t>(other)]) + 1;
               i < stack.size(); ++i) {
            int parent = stack[i - 1].node;
            cycle.push_back({stack[i].entry, stack[i].entry.from == parent});
          }
          cycle.push_back({e, e.from == top.node});
          return cycle;
        }
        // visited and finished: unreachable in undirected DFS, ignore
      }
      if (!descended) {
        on_stack[static_cast<size_t>(top.node)] = 0;
        stack_pos[static_cast<size_t>(top.node)] = -1;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

std::vector<EdgeKey> star_edges(const ScheduleMatrix& s, const Job& job, int row) {
  std::vector<int> frac;
  for (int t = job.arrival; t <= job.latest_start(); ++t)
    if (s.is_fractional(s.at(row, t))) frac.push_back(t);
  std::vector<EdgeKey> edges;
  if (frac.size() < 2) return edges;
  edges.reserve(frac.size() - 1);
  for (size_t k = 1; k < frac.size(); ++k) edges.push_back({frac[0], frac[k], row});
  return edges;
}

void snap_entry(ScheduleMatrix& s, int job, int t,
                std::vector<std::pair<int, int>>* integralized) {
  double& v = s.at(job, t);
  if (std::abs(v) <= s.integrality_tolerance) {
    v = 0.0;
    if (integralized) integralized->emplace_back(job, t);
  } else if (std::abs(v - 1.0) <= s.integrality_tolerance) {
    v = 1.0;
    if (integralized) integralized->emplace_back(job, t);
  }
}

void require_relaxation_feasible(const Instance& instance, const ScheduleMatrix& s) {
  FeasibilityReport rep = check_feasibility(instance, s, /*integral=*/false);
  if (!rep.feasible())
    throw InfeasibleInput("adjustment input infeasible: " + rep.summary());
}

// Zero-power rows contribute nothing to the load; collapse them to their
// heaviest start so they cannot enter any multigraph (the per-edge updates
// scale by 1/p).
void collapse_zero_power_rows(const Instance& instance, ScheduleMatrix& s,
                              std::vector<std::pair<int, int>>* integralized) {
  for (int j = 0; j < s.num_jobs; ++j) {
    const Job& job = instance.jobs[static_cast<size_t>(j)];
    if (job.max_power() > 0.0) continue;
    if (s.fractional_count_row(j) == 0) continue;
    int best_t = job.arrival;
    double best_v = -1.0;
    for (int t = job.arrival; t <= job.latest_start(); ++t)
      if (s.at(j, t) > best_v) {
        best_v = s.at(j, t);
        best_t = t;
      }
    for (int t = job.arrival; t <= job.latest_start(); ++t) s.at(j, t) = 0.0;
    s.at(j, best_t) = 1.0;
    if (integralized) integralized->emplace_back(j, best_t);
  }
}

}  // namespace

DurationMultigraph build_duration_graph(const Instance& instance,
                                        const ScheduleMatrix& schedule, int duration) {
  DurationMultigraph g;
  g.duration = duration;
  g.horizon = instance.horizon;
  for (int j = 0; j < schedule.num_jobs; ++j) {
    const Job& job = instance.jobs[static_cast<size_t>(j)];
    if (job.duration != duration) continue;
    auto edges = star_edges(schedule, job, j);
    g.edges.insert(g.edges.end(), edges.begin(), edges.end());
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::optional<std::vector<OrientedEdge>> find_cycle(const DurationMultigraph& graph) {
  Adjacency incident(static_cast<size_t>(graph.horizon) + 1);
  for (const EdgeKey& e : graph.edges) {
    incident[static_cast<size_t>(e.from)].insert(e);
    incident[static_cast<size_t>(e.to)].insert(e);
  }
  return dfs_find_cycle(incident, graph.horizon);
}

std::pair<ScheduleMatrix, AdjustReport> adjust_rectangular(const Instance& instance,
                                                           ScheduleMatrix schedule,
                                                           const AdjustOptions& opts) {
  for (const Job& job : instance.jobs)
    if (job.shape_kind != ShapeKind::Rectangular)
      throw NotRectangular("adjust_rectangular requires rectangular jobs");
  require_relaxation_feasible(instance, schedule);
  schedule.snap();

  AdjustReport report;
  report.fractional_before = schedule.fractional_count();
  collapse_zero_power_rows(instance, schedule, nullptr);

  const int T = instance.horizon;
  std::vector<int> durations;
  for (const Job& job : instance.jobs) durations.push_back(job.duration);
  std::sort(durations.begin(), durations.end());
  durations.erase(std::unique(durations.begin(), durations.end()), durations.end());

  std::vector<double> load_delta(static_cast<size_t>(T) + 1, 0.0);

  for (int d : durations) {
    if (opts.max_steps >= 0 && report.steps >= opts.max_steps) break;
    Adjacency incident(static_cast<size_t>(T) + 1);
    std::vector<std::vector<EdgeKey>> job_edges(
        static_cast<size_t>(schedule.num_jobs));
    for (int j = 0; j < schedule.num_jobs; ++j) {
      const Job& job = instance.jobs[static_cast<size_t>(j)];
      if (job.duration != d) continue;
      job_edges[static_cast<size_t>(j)] = star_edges(schedule, job, j);
      for (const EdgeKey& e : job_edges[static_cast<size_t>(j)]) {
        incident[static_cast<size_t>(e.from)].insert(e);
        incident[static_cast<size_t>(e.to)].insert(e);
      }
    }

    while (true) {
      if (opts.max_steps >= 0 && report.steps >= opts.max_steps) break;
      auto cycle = dfs_find_cycle(incident, T);
      if (!cycle) break;

      AdjustStep step;
      step.duration = d;

      // Net per-entry coefficients (units of Delta). A cycle that enters and
      // leaves a node through the same job's star touches that root twice
      // with opposite signs; the bound must come from the net movement or an
      // aliased root can absorb Delta* without any entry reaching a bound.
      std::map<std::pair<int, int>, double> net;  // (job, slot) -> d(entry)/d(Delta)
      for (const OrientedEdge& oe : *cycle) {
        const Job& job = instance.jobs[static_cast<size_t>(oe.edge.job)];
        const double p = job.power_shape[0];
        const int dec_t = oe.forward ? oe.edge.from : oe.edge.to;
        const int inc_t = oe.forward ? oe.edge.to : oe.edge.from;
        net[{oe.edge.job, dec_t}] -= 1.0 / p;
        net[{oe.edge.job, inc_t}] += 1.0 / p;
        step.jobs.push_back(oe.edge.job);
      }
      double delta = HUGE_VAL;
      for (const auto& [entry, coeff] : net) {
        double v = schedule.at(entry.first, entry.second);
        if (coeff < 0.0)
          delta = std::min(delta, v / -coeff);
        else if (coeff > 0.0)
          delta = std::min(delta, (1.0 - v) / coeff);
      }
      if (!std::isfinite(delta)) throw Error("cycle with no movable entry");
      step.delta = delta;

      // apply Delta* and measure the realized load change
      std::vector<int> touched_slots;
      for (const auto& [entry, coeff] : net) {
        if (coeff == 0.0) continue;
        const auto [job_row, slot] = entry;
        const double p = instance.jobs[static_cast<size_t>(job_row)].power_shape[0];
        double before = schedule.at(job_row, slot);
        schedule.at(job_row, slot) = before + coeff * delta;
        snap_entry(schedule, job_row, slot, &step.integralized);
        double applied = schedule.at(job_row, slot) - before;
        for (int u = slot; u < slot + d && u <= T; ++u) {
          load_delta[static_cast<size_t>(u)] += applied * p;
          touched_slots.push_back(u);
        }
      }
      for (int u : touched_slots) {
        step.load_deviation =
            std::max(step.load_deviation, std::abs(load_delta[static_cast<size_t>(u)]));
        load_delta[static_cast<size_t>(u)] = 0.0;
      }
      report.max_load_deviation = std::max(report.max_load_deviation, step.load_deviation);

      if (step.integralized.empty())
        throw Error("cycle cancellation made no progress");

      // rebuild stars of participating jobs
      std::vector<int> jobs_touched = step.jobs;
      std::sort(jobs_touched.begin(), jobs_touched.end());
      jobs_touched.erase(std::unique(jobs_touched.begin(), jobs_touched.end()),
                         jobs_touched.end());
      for (int j : jobs_touched) {
        for (const EdgeKey& e : job_edges[static_cast<size_t>(j)]) {
          incident[static_cast<size_t>(e.from)].erase(e);
          incident[static_cast<size_t>(e.to)].erase(e);
        }
        job_edges[static_cast<size_t>(j)] =
            star_edges(schedule, instance.jobs[static_cast<size_t>(j)], j);
        for (const EdgeKey& e : job_edges[static_cast<size_t>(j)]) {
          incident[static_cast<size_t>(e.from)].insert(e);
          incident[static_cast<size_t>(e.to)].insert(e);
        }
      }

      ++report.steps;
      if (opts.record_trace) report.trace.push_back(std::move(step));
    }
  }

  report.fractional_after = schedule.fractional_count();
  return {std::move(schedule), std::move(report)};
}

std::pair<ScheduleMatrix, AdjustReport> adjust_realistic(const Instance& instance,
                                                         ScheduleMatrix schedule,
                                                         const AdjustOptions& opts) {
  require_relaxation_feasible(instance, schedule);
  schedule.snap();

  AdjustReport report;
  report.fractional_before = schedule.fractional_count();

  const int T = instance.horizon;
  const int d_max = instance.max_duration();
  const int D = d_max + 1;
  const int J = schedule.num_jobs;
  if (J < D || d_max == 0) {
    report.fractional_after = schedule.fractional_count();
    return {std::move(schedule), std::move(report)};
  }

  std::vector<std::vector<double>> padded(static_cast<size_t>(J));
  for (int j = 0; j < J; ++j) {
    padded[static_cast<size_t>(j)] = instance.jobs[static_cast<size_t>(j)].power_shape;
    padded[static_cast<size_t>(j)].resize(static_cast<size_t>(d_max), 0.0);
  }

  std::vector<double> load_delta(static_cast<size_t>(T) + 1, 0.0);
  bool done = false;

  for (int t = 1; t <= T - 1 && !done; ++t) {
    for (int t2 = t + 1; t2 <= T && !done; ++t2) {
      std::vector<int> members;  // J' under construction
      for (int j = 0; j < J; ++j) {
        if (!schedule.is_fractional(schedule.at(j, t)) ||
            !schedule.is_fractional(schedule.at(j, t2)))
          continue;
        members.push_back(j);
        if (static_cast<int>(members.size()) < D) continue;

        if (opts.max_steps >= 0 && report.steps >= opts.max_steps) {
          done = true;
          break;
        }

        // null vector of the (D-1) x D padded-shape matrix of J'
        std::vector<std::vector<double>> mat(
            static_cast<size_t>(d_max), std::vector<double>(static_cast<size_t>(D)));
        for (int r = 0; r < d_max; ++r)
          for (int k = 0; k < D; ++k)
            mat[static_cast<size_t>(r)][static_cast<size_t>(k)] =
                padded[static_cast<size_t>(members[static_cast<size_t>(k)])]
                      [static_cast<size_t>(r)];
        std::vector<double> xi = null_vector(mat);

        double delta = HUGE_VAL;
        for (int k = 0; k < D; ++k) {
          const int job = members[static_cast<size_t>(k)];
          const double x = xi[static_cast<size_t>(k)];
          if (x > 0) {
            delta = std::min(delta, (1.0 - schedule.at(job, t)) / x);
            delta = std::min(delta, schedule.at(job, t2) / x);
          } else if (x < 0) {
            delta = std::min(delta, schedule.at(job, t) / -x);
            delta = std::min(delta, (1.0 - schedule.at(job, t2)) / -x);
          }
        }

        AdjustStep step;
        step.pair_t = t;
        step.pair_t2 = t2;
        step.jobs = members;
        step.xi = xi;
        step.delta = delta;

        std::vector<int> touched_slots;
        for (int k = 0; k < D; ++k) {
          const int job = members[static_cast<size_t>(k)];
          const double x = xi[static_cast<size_t>(k)];
          if (x == 0.0) continue;
          const Job& jb = instance.jobs[static_cast<size_t>(job)];
          for (auto [slot, sign] : {std::pair{t, 1.0}, std::pair{t2, -1.0}}) {
            double before = schedule.at(job, slot);
            schedule.at(job, slot) = before + sign * x * delta;
            snap_entry(schedule, job, slot, &step.integralized);
            double applied = schedule.at(job, slot) - before;
            for (int u = slot; u < slot + jb.duration && u <= T; ++u) {
              load_delta[static_cast<size_t>(u)] +=
                  applied * jb.power_shape[static_cast<size_t>(u - slot)];
              touched_slots.push_back(u);
            }
          }
        }
        for (int u : touched_slots) {
          step.load_deviation = std::max(step.load_deviation,
                                         std::abs(load_delta[static_cast<size_t>(u)]));
          load_delta[static_cast<size_t>(u)] = 0.0;
        }
        report.max_load_deviation =
            std::max(report.max_load_deviation, step.load_deviation);

        if (step.integralized.empty())
          throw Error("pair update made no progress");

        // keep only members still fractional at both slots
        std::vector<int> kept;
        for (int m : members)
          if (schedule.is_fractional(schedule.at(m, t)) &&
              schedule.is_fractional(schedule.at(m, t2)))
            kept.push_back(m);
        members = std::move(kept);

        ++report.steps;
        if (opts.record_trace) report.trace.push_back(std::move(step));
      }
    }
  }

  report.fractional_after = schedule.fractional_count();
  return {std::move(schedule), std::move(report)};
}

std::vector<double> null_vector(const std::vector<std::vector<double>>& shapes) {
  const int rows = static_cast<int>(shapes.size());
  const int cols = rows + 1;
  for (const auto& row : shapes)
    if (static_cast<int>(row.size()) != cols)
      throw InvalidArgument("null_vector: matrix must be (D-1) x D");

  std::vector<std::vector<double>> a = shapes;
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));

  // forward elimination with partial pivoting
  std::vector<int> pivot_col_of_row(static_cast<size_t>(rows), -1);
  std::vector<char> col_is_pivot(static_cast<size_t>(cols), 0);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int best = -1;
    double best_abs = std::max(1e-14 * scale, 1e-300);
    for (int i = r; i < rows; ++i) {
      double v = std::abs(a[static_cast<size_t>(i)][static_cast<size_t>(c)]);
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
    if (best < 0) continue;  // free column
    std::swap(a[static_cast<size_t>(r)], a[static_cast<size_t>(best)]);
    const double piv = a[static_cast<size_t>(r)][static_cast<size_t>(c)];
    for (int i = r + 1; i < rows; ++i) {
      double f = a[static_cast<size_t>(i)][static_cast<size_t>(c)] / piv;
      if (f == 0.0) continue;
      for (int k = c; k < cols; ++k)
        a[static_cast<size_t>(i)][static_cast<size_t>(k)] -=
            f * a[static_cast<size_t>(r)][static_cast<size_t>(k)];
      a[static_cast<size_t>(i)][static_cast<size_t>(c)] = 0.0;
    }
    pivot_col_of_row[static_cast<size_t>(r)] = c;
    col_is_pivot[static_cast<size_t>(c)] = 1;
    ++r;
  }

  int free_col = -1;
  for (int c = 0; c < cols; ++c)
    if (!col_is_pivot[static_cast<size_t>(c)]) {
      free_col = c;
      break;
    }

  std::vector<double> xi(static_cast<size_t>(cols), 0.0);
  xi[static_cast<size_t>(free_col)] = 1.0;
  for (int i = r - 1; i >= 0; --i) {
    const int pc = pivot_col_of_row[static_cast<size_t>(i)];
    double sum = 0.0;
    for (int k = pc + 1; k < cols; ++k)
      sum += a[static_cast<size_t>(i)][static_cast<size_t>(k)] * xi[static_cast<size_t>(k)];
    xi[static_cast<size_t>(pc)] = -sum / a[static_cast<size_t>(i)][static_cast<size_t>(pc)];
  }

  double norm = 0.0;
  for (double v : xi) norm = std::max(norm, std::abs(v));
  for (double& v : xi) v /= norm;
  for (double v : xi) {
    if (v != 0.0) {
      if (v < 0.0)
        for (double& w : xi) w = -w;
      break;
    }
  }

  double residual = 0.0;
  for (const auto& row : shapes) {
    double dot = 0.0;
    for (int c = 0; c < cols; ++c)
      dot += row[static_cast<size_t>(c)] * xi[static_cast<size_t>(c)];
    residual = std::max(residual, std::abs(dot));
  }
  if (residual > 1e-10 * std::max(scale, 1.0))
    throw Error("null_vector: residual " + std::to_string(residual) + " too large");
  return xi;
}

}  // namespace flexsched
