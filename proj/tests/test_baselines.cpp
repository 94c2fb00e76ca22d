#include <doctest.h>

#include <cmath>

#include "flexsched/baselines.hpp"
#include "flexsched/generators.hpp"
#include "flexsched/model.hpp"
#include "flexsched/pipeline.hpp"
#include "flexsched/rng.hpp"
#include "test_helpers.hpp"

using namespace flexsched;
using namespace flexsched::testing;

TEST_SUITE_BEGIN("baselines");

TEST_CASE("oracle reproduces the adversarial optimum N^2 T") {
  for (auto [N, T] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{3, 4}}) {
    Instance instance = generate_adversarial(N, T);
    OracleResult oracle = brute_force_optimal(instance, 1e9);
    CHECK(oracle.optimal_cost == doctest::Approx(N * N * T).epsilon(1e-12));
  }
  CHECK_THROWS_AS(generate_adversarial(0, 4), InvalidArgument);
  CHECK_THROWS_AS(generate_adversarial(2, 1), InvalidArgument);
}

TEST_CASE("single job: oracle picks the cheapest admissible placement") {
  SyntheticConfig cfg;
  cfg.num_jobs = 1;
  cfg.horizon = 8;
  cfg.duration_max = 3;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Instance instance = generate_synthetic(cfg, seed);
    OracleResult oracle = brute_force_optimal(instance);
    const Job& job = instance.jobs[0];
    double best = HUGE_VAL;
    for (int t : admissible_starts(job, instance.horizon)) {
      LoadProfile load = profile_column(job, t, instance.horizon);
      best = std::min(best, evaluate_cost(instance, load));
    }
    CHECK(oracle.optimal_cost == doctest::Approx(best).epsilon(1e-12));
    ScheduleMatrix greedy = greedy_schedule(instance);
    CHECK(evaluate_cost(instance, aggregate_load(instance, greedy)) ==
          doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("oracle dominates random feasible schedules") {
  SyntheticConfig cfg;
  cfg.num_jobs = 6;
  cfg.horizon = 6;
  cfg.duration_max = 2;
  cfg.window_slack_max = 3;
  Instance instance = generate_synthetic(cfg, 99);
  OracleResult oracle = brute_force_optimal(instance);
  RngStream rng(4);
  for (int i = 0; i < 100; ++i) {
    RngStream r = rng.fork(i);
    std::vector<int> starts;
    for (const Job& job : instance.jobs) {
      auto options = admissible_starts(job, instance.horizon);
      starts.push_back(options[static_cast<size_t>(
          r.uniform_int(0, static_cast<int>(options.size()) - 1))]);
    }
    double cost = evaluate_cost(
        instance,
        aggregate_load(instance, ScheduleMatrix::from_starts(starts, instance.horizon)));
    CHECK(oracle.optimal_cost <= cost + 1e-9);
  }
}

TEST_CASE("oracle budget guard") {
  SyntheticConfig cfg;
  cfg.num_jobs = 40;
  cfg.horizon = 24;
  cfg.window_slack_max = 12;
  Instance instance = generate_synthetic(cfg, 1);
  CHECK_THROWS_AS(brute_force_optimal(instance, 1e4), BudgetExceeded);
}

TEST_CASE("greedy splits two identical unit jobs across slots") {
  Instance instance;
  instance.horizon = 2;
  instance.jobs.push_back(Job::rectangular(0, 1.0, 1, 1, 2));
  instance.jobs.push_back(Job::rectangular(1, 1.0, 1, 1, 2));
  instance.cost = CostModel::quadratic_pure(2.0);
  ScheduleMatrix s = greedy_schedule(instance);
  CHECK(evaluate_cost(instance, aggregate_load(instance, s)) == doctest::Approx(2.0));
}

TEST_CASE("greedy is feasible under every ordering") {
  SyntheticConfig cfg;
  cfg.num_jobs = 50;
  cfg.horizon = 12;
  cfg.duration_max = 3;
  Instance instance = generate_synthetic(cfg, 12);
  for (GreedyOrder order :
       {GreedyOrder::ByIndex, GreedyOrder::ByArrival, GreedyOrder::BySlack}) {
    ScheduleMatrix s = greedy_schedule(instance, order);
    CHECK(check_feasibility(instance, s, true).feasible());
  }
}

TEST_CASE("direct rounding concentrates the adversarial instance at slot 1") {
  const int N = 3, T = 4;
  Instance instance = generate_adversarial(N, T);
  ScheduleMatrix s =
      relax_round_no_adjust(instance, {}, {RoundingMode::MaxProbability, 0});
  for (int j = 0; j < instance.num_jobs(); ++j) CHECK(s.at(j, 1) == 1.0);
  double cost = evaluate_cost(instance, aggregate_load(instance, s));
  double optimal = static_cast<double>(N) * N * T;
  double per_job_gap = (cost - optimal) / instance.num_jobs();
  CHECK(per_job_gap == doctest::Approx(N * (T - 1)).epsilon(1e-12));
  CHECK(per_job_gap >= 0.5 * N * T);
}

TEST_CASE("relax-round equals RAR when the relaxation is already integral") {
  Instance instance;
  instance.horizon = 4;
  instance.jobs.push_back(Job::rectangular(0, 2.0, 2, 1, 4));
  instance.cost = CostModel::linear({1.0, 2.0, 3.0, 4.0}, 2.0);
  ScheduleMatrix direct = relax_round_no_adjust(instance, {}, {});
  RarOutput rar = run_rar(instance, {}, {});
  CHECK(direct.entries == rar.integral.entries);

  SyntheticConfig cfg;
  cfg.num_jobs = 20;
  cfg.horizon = 10;
  Instance random_instance = generate_synthetic(cfg, 44);
  ScheduleMatrix rounded = relax_round_no_adjust(random_instance, {}, {});
  CHECK(check_feasibility(random_instance, rounded, true).feasible());
}

TEST_SUITE_END();
