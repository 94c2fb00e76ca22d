#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flexsched/adjust.hpp"
#include "flexsched/baselines.hpp"
#include "flexsched/pricing.hpp"
#include "flexsched/rounding.hpp"
#include "flexsched/solver.hpp"
#include "flexsched/stochastic.hpp"
#include "flexsched/types.hpp"

namespace flexsched {

struct RarOutput {
  RelaxSolution relax;
  ScheduleMatrix adjusted;
  AdjustReport adjust_report;
  ScheduleMatrix integral;
  bool used_realistic_adjustment = false;
  double adjust_wall_ms = 0.0;
};

// Relaxation -> lossless adjustment -> rounding. The rectangular cycle
// cancellation runs when every job is rectangular unless force_realistic asks
// for the shape-general pair updates.
RarOutput run_rar(const Instance& instance, const SolverConfig& solver_config = {},
                  const RoundingConfig& rounding_config = {},
                  bool force_realistic = false);

struct AlgoResult {
  std::string algo;
  double cost = 0.0;
  std::optional<double> subopt_pct;  // vs oracle when available
  double wall_ms = 0.0;
  int fractional_before = -1;
  int fractional_after = -1;
  std::optional<double> gap_certificate;
  std::optional<double> adjust_wall_ms;
  std::optional<long long> oracle_nodes;
  // pricing audit summary (when requested)
  std::optional<double> max_payment_residual;
  std::optional<int> payment_flags;
  std::optional<int> self_scheduling_violations;
  LoadProfile load;
};

struct RunConfig {
  std::vector<std::string> algos = {"rar"};
  SolverConfig solver;
  RoundingConfig rounding;
  double oracle_budget = 1e7;
  bool audit_pricing = false;
  // stochastic arms: renewable model (from the instance JSON "stochastic"
  // key), SAA sample count, and the Monte-Carlo evaluation size
  std::optional<RenewableModel> renewable_model;
  int saa_samples = 100;
  int eval_samples = 20000;
  uint64_t seed = 0;
};

struct RunReport {
  int num_jobs = 0;
  int horizon = 0;
  int max_duration = 0;
  double total_energy = 0.0;
  uint64_t seed = 0;
  std::vector<AlgoResult> results;

  const AlgoResult* find(const std::string& algo) const;
};

// Runs the requested algorithms on one instance. Known names: rar,
// rar-realistic, greedy, relax-round, oracle, modified-rar, saa-rar.
RunReport run_algorithms(const Instance& instance, const RunConfig& config);

struct SweepConfig {
  std::vector<int> job_counts;
  int instances_per_cell = 50;
  uint64_t seed = 0;
  int horizon = 24;
  std::vector<std::string> algos = {"rar", "greedy"};
  SolverConfig solver;
  double oracle_budget = 1e7;
  int workers = 1;
  ShapeKind shape = ShapeKind::Rectangular;
};

struct SweepRow {
  int num_jobs = 0;
  int instance_index = 0;
  uint64_t seed = 0;
  std::string algo;
  double cost = 0.0;
  double benchmark_cost = 0.0;  // oracle when available, else relaxation
  std::string benchmark;        // "oracle" | "relaxation"
  double subopt_pct = 0.0;
  double wall_ms = 0.0;
  bool failed = false;
  std::string error;
};

struct SweepSummary {
  int num_jobs = 0;
  std::string algo;
  double mean_subopt_pct = 0.0;
  double std_subopt_pct = 0.0;
  double mean_wall_ms = 0.0;
  int count = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;          // sorted by (J, instance, algo)
  std::vector<SweepSummary> summary;   // per (J, algo)
};

// Generates instances_per_cell synthetic instances per J and runs each
// requested algorithm; rows for failed cells are flagged and the sweep
// continues. Instances execute concurrently up to `workers`.
SweepResult run_sweep(const SweepConfig& config);

// Fixed 12-significant-digit formatting used by every report and CSV writer,
// so identical runs produce byte-identical artifacts.
std::string format_number(double v);

std::string loads_csv(const Instance& instance, const RunReport& report);
std::string sweep_csv(const SweepResult& sweep);

}  // namespace flexsched
