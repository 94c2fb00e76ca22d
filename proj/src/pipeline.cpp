#include "flexsched/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "flexsched/generators.hpp"
#include "flexsched/model.hpp"
#include "flexsched/rng.hpp"
#include "flexsched/stochastic.hpp"

namespace flexsched {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   from)
      .count();
}

bool all_rectangular(const Instance& instance) {
  for (const Job& job : instance.jobs)
    if (job.shape_kind != ShapeKind::Rectangular) return false;
  return true;
}

}  // namespace

RarOutput run_rar(const Instance& instance, const SolverConfig& solver_config,
                  const RoundingConfig& rounding_config, bool force_realistic) {
  RarOutput out;
  out.relax = solve_relaxation(instance, solver_config);
  out.used_realistic_adjustment = force_realistic || !all_rectangular(instance);

  auto t0 = std::chrono::steady_clock::now();
  AdjustOptions opts;
  opts.record_trace = false;
  auto [adjusted, report] =
      out.used_realistic_adjustment
          ? adjust_realistic(instance, out.relax.schedule, opts)
          : adjust_rectangular(instance, out.relax.schedule, opts);
  out.adjust_wall_ms = elapsed_ms(t0);
  out.adjusted = std::move(adjusted);
  out.adjust_report = std::move(report);
  out.integral = round_schedule(out.adjusted, rounding_config);
  return out;
}

const AlgoResult* RunReport::find(const std::string& algo) const {
  for (const AlgoResult& r : results)
    if (r.algo == algo) return &r;
  return nullptr;
}

RunReport run_algorithms(const Instance& instance, const RunConfig& config) {
  instance.validate();
  RunReport report;
  report.num_jobs = instance.num_jobs();
  report.horizon = instance.horizon;
  report.max_duration = instance.max_duration();
  report.total_energy = instance.total_energy();
  report.seed = config.seed;

  RoundingConfig rounding = config.rounding;
  rounding.seed = RngStream(config.seed).fork("rounding-root").key();

  std::optional<double> oracle_cost;

  for (const std::string& algo : config.algos) {
    AlgoResult res;
    res.algo = algo;
    auto t0 = std::chrono::steady_clock::now();
    if (algo == "rar" || algo == "rar-realistic") {
      RarOutput out =
          run_rar(instance, config.solver, rounding, algo == "rar-realistic");
      res.load = aggregate_load(instance, out.integral);
      res.cost = evaluate_cost(instance, res.load);
      res.fractional_before = out.adjust_report.fractional_before;
      res.fractional_after = out.adjust_report.fractional_after;
      res.gap_certificate = out.relax.gap_certificate;
      res.adjust_wall_ms = out.adjust_wall_ms;
      if (config.audit_pricing) {
        PaymentLedger ledger =
            audit_payment_equivalence(instance, out.relax.schedule, out.integral,
                                      out.relax.prices, out.relax.gap_certificate);
        double max_residual = 0.0;
        for (const auto& e : ledger.entries)
          max_residual = std::max(max_residual, e.residual);
        res.max_payment_residual = max_residual;
        res.payment_flags = ledger.flagged_count;
        SelfSchedulingReport ss = audit_self_scheduling(
            instance, out.integral, out.relax.prices, out.relax.gap_certificate);
        res.self_scheduling_violations = ss.violation_count;
      }
    } else if (algo == "greedy") {
      ScheduleMatrix s = greedy_schedule(instance);
      res.load = aggregate_load(instance, s);
      res.cost = evaluate_cost(instance, res.load);
    } else if (algo == "relax-round") {
      ScheduleMatrix s = relax_round_no_adjust(instance, config.solver, rounding);
      res.load = aggregate_load(instance, s);
      res.cost = evaluate_cost(instance, res.load);
    } else if (algo == "oracle") {
      OracleResult oracle = brute_force_optimal(instance, config.oracle_budget);
      res.cost = oracle.optimal_cost;
      res.oracle_nodes = oracle.nodes_explored;
      res.load = aggregate_load(
          instance, ScheduleMatrix::from_starts(oracle.optimal_starts, instance.horizon));
      oracle_cost = oracle.optimal_cost;
    } else if (algo == "modified-rar" || algo == "saa-rar") {
      StochasticCost scost;
      scost.renewable = config.renewable_model.value_or(RenewableModel{});
      if (algo == "modified-rar") {
        auto [schedule, load] = modified_rar(instance, config.solver, rounding);
        res.load = std::move(load);
      } else {
        ScheduleMatrix s =
            baseline_saa_rar(instance, scost, config.saa_samples, config.solver,
                             rounding, RngStream(config.seed).fork("saa").key());
        res.load = aggregate_load(instance, s);
      }
      MonteCarloEstimate est = monte_carlo_cost(
          res.load, scost, config.eval_samples, RngStream(config.seed).fork("eval").key());
      res.cost = est.mean;
    } else {
      throw InvalidArgument("unknown algorithm: " + algo);
    }
    res.wall_ms = elapsed_ms(t0);
    report.results.push_back(std::move(res));
  }

  if (oracle_cost && *oracle_cost > 0) {
    for (AlgoResult& r : report.results)
      if (r.algo != "oracle")
        r.subopt_pct = (r.cost - *oracle_cost) / *oracle_cost * 100.0;
  }
  return report;
}

SweepResult run_sweep(const SweepConfig& config) {
  struct Cell {
    int num_jobs;
    int instance_index;
    uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int J : config.job_counts)
    for (int i = 0; i < config.instances_per_cell; ++i) {
      uint64_t seed = RngStream(config.seed)
                          .fork("sweep")
                          .fork(static_cast<uint64_t>(J))
                          .fork(static_cast<uint64_t>(i))
                          .key();
      cells.push_back({J, i, seed});
    }

  std::vector<std::vector<SweepRow>> per_cell(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      const Cell& cell = cells[k];
      std::vector<SweepRow>& rows = per_cell[k];
      try {
        SyntheticConfig gen;
        gen.num_jobs = cell.num_jobs;
        gen.horizon = config.horizon;
        gen.shape = config.shape;
        Instance instance = generate_synthetic(gen, cell.seed);

        RunConfig run;
        run.algos = config.algos;
        run.solver = config.solver;
        run.oracle_budget = config.oracle_budget;
        run.seed = cell.seed;
        // benchmark: oracle when cheap enough, otherwise the relaxation bound
        double benchmark_cost;
        std::string benchmark;
        bool oracle_ok = true;
        double tuples = 1.0;
        for (const Job& job : instance.jobs) {
          tuples *= static_cast<double>(job.latest_start() - job.arrival + 1);
          if (tuples > config.oracle_budget) {
            oracle_ok = false;
            break;
          }
        }
        if (oracle_ok) {
          benchmark_cost = brute_force_optimal(instance, config.oracle_budget).optimal_cost;
          benchmark = "oracle";
        } else {
          SolverConfig relaxed = config.solver;
          relaxed.strict = false;
          benchmark_cost = solve_relaxation(instance, relaxed).objective;
          benchmark = "relaxation";
        }

        RunReport report = run_algorithms(instance, run);
        for (const AlgoResult& r : report.results) {
          SweepRow row;
          row.num_jobs = cell.num_jobs;
          row.instance_index = cell.instance_index;
          row.seed = cell.seed;
          row.algo = r.algo;
          row.cost = r.cost;
          row.benchmark_cost = benchmark_cost;
          row.benchmark = benchmark;
          row.subopt_pct = benchmark_cost > 0
                               ? (r.cost - benchmark_cost) / benchmark_cost * 100.0
                               : 0.0;
          row.wall_ms = r.wall_ms;
          rows.push_back(std::move(row));
        }
      } catch (const std::exception& ex) {
        SweepRow row;
        row.num_jobs = cell.num_jobs;
        row.instance_index = cell.instance_index;
        row.seed = cell.seed;
        row.algo = "-";
        row.failed = true;
        row.error = ex.what();
        rows.push_back(std::move(row));
      }
    }
  };

  int workers = std::max(1, config.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  for (auto& rows : per_cell)
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  std::sort(result.rows.begin(), result.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              return std::tie(a.num_jobs, a.instance_index, a.algo) <
                     std::tie(b.num_jobs, b.instance_index, b.algo);
            });

  for (int J : config.job_counts) {
    for (const std::string& algo : config.algos) {
      double sum = 0.0, sum_sq = 0.0, wall = 0.0;
      int n = 0;
      for (const SweepRow& row : result.rows) {
        if (row.num_jobs != J || row.algo != algo || row.failed) continue;
        sum += row.subopt_pct;
        sum_sq += row.subopt_pct * row.subopt_pct;
        wall += row.wall_ms;
        ++n;
      }
      if (n == 0) continue;
      SweepSummary s;
      s.num_jobs = J;
      s.algo = algo;
      s.count = n;
      s.mean_subopt_pct = sum / n;
      s.std_subopt_pct =
          n > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1))) : 0.0;
      s.mean_wall_ms = wall / n;
      result.summary.push_back(s);
    }
  }
  return result;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string loads_csv(const Instance& instance, const RunReport& report) {
  std::ostringstream os;
  os << "t";
  for (const AlgoResult& r : report.results) os << ",L_" << r.algo;
  os << ",R\n";
  for (int t = 1; t <= instance.horizon; ++t) {
    os << t;
    for (const AlgoResult& r : report.results)
      os << "," << format_number(r.load.horizon() >= t ? r.load.at(t) : 0.0);
    os << "," << format_number(instance.target(t)) << "\n";
  }
  return os.str();
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "row,J,instance,seed,algo,cost,benchmark,benchmark_cost,subopt_pct,wall_ms,"
        "failed,error\n";
  for (const SweepRow& r : sweep.rows) {
    os << "result," << r.num_jobs << "," << r.instance_index << "," << r.seed << ","
       << r.algo << "," << format_number(r.cost) << "," << r.benchmark << ","
       << format_number(r.benchmark_cost) << "," << format_number(r.subopt_pct) << ","
       << format_number(r.wall_ms) << "," << (r.failed ? 1 : 0) << "," << r.error
       << "\n";
  }
  os << "row,J,algo,count,mean_subopt_pct,std_subopt_pct,mean_wall_ms\n";
  for (const SweepSummary& s : sweep.summary)
    os << "summary," << s.num_jobs << "," << s.algo << "," << s.count << ","
       << format_number(s.mean_subopt_pct) << "," << format_number(s.std_subopt_pct)
       << "," << format_number(s.mean_wall_ms) << "\n";
  return os.str();
}

}  // namespace flexsched
