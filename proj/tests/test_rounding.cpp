#include <doctest.h>

#include <cmath>

#include "flexsched/generators.hpp"
#include "flexsched/model.hpp"
#include "flexsched/pipeline.hpp"
#include "flexsched/rounding.hpp"
#include "test_helpers.hpp"

using namespace flexsched;
using namespace flexsched::testing;

TEST_SUITE_BEGIN("rounding");

TEST_CASE("integral input is the fixed point of both modes") {
  ScheduleMatrix s = ScheduleMatrix::from_starts({2, 1, 3}, 3);
  for (RoundingMode mode : {RoundingMode::Randomized, RoundingMode::MaxProbability}) {
    RoundingConfig cfg{mode, 99};
    CHECK(round_schedule(s, cfg).entries == s.entries);
  }
}

TEST_CASE("empirical start frequency matches the fractional weight") {
  ScheduleMatrix s = matrix_from_rows({{0.25, 0.75, 0.0}}, 3);
  int hits = 0;
  const int n = 100000;
  for (int seed = 0; seed < n; ++seed) {
    RoundingConfig cfg{RoundingMode::Randomized, static_cast<uint64_t>(seed)};
    if (round_schedule(s, cfg).at(0, 1) == 1.0) ++hits;
  }
  double freq = static_cast<double>(hits) / n;
  CHECK(freq == doctest::Approx(0.25).epsilon(0.04));  // 0.25 +/- 0.01
  CHECK(std::abs(freq - 0.25) <= 0.01);
}

TEST_CASE("max-probability picks the argmax, ties to the earliest slot") {
  RoundingConfig cfg{RoundingMode::MaxProbability, 0};
  CHECK(round_schedule(matrix_from_rows({{0.4, 0.6}}, 2), cfg).at(0, 2) == 1.0);
  CHECK(round_schedule(matrix_from_rows({{0.5, 0.5}}, 2), cfg).at(0, 1) == 1.0);
}

TEST_CASE("rounded schedules are integral-feasible for every seed") {
  SyntheticConfig gen;
  gen.num_jobs = 25;
  gen.horizon = 10;
  gen.duration_max = 3;
  Instance instance = generate_synthetic(gen, 17);
  ScheduleMatrix fractional = random_fractional_schedule(instance, RngStream(3));
  for (uint64_t seed = 0; seed < 100; ++seed) {
    ScheduleMatrix rounded =
        round_schedule(fractional, {RoundingMode::Randomized, seed});
    CHECK(check_feasibility(instance, rounded, true).feasible());
  }
}

TEST_CASE("support preservation: rounded starts had positive input weight") {
  SyntheticConfig gen;
  gen.num_jobs = 15;
  gen.horizon = 8;
  Instance instance = generate_synthetic(gen, 23);
  ScheduleMatrix fractional = random_fractional_schedule(instance, RngStream(5));
  for (uint64_t seed = 0; seed < 200; ++seed) {
    ScheduleMatrix rounded =
        round_schedule(fractional, {RoundingMode::Randomized, seed});
    for (int j = 0; j < rounded.num_jobs; ++j)
      for (int t = 1; t <= rounded.horizon; ++t)
        if (rounded.at(j, t) == 1.0)
          CHECK(fractional.at(j, t) > fractional.integrality_tolerance);
  }
}

TEST_CASE("expected rounded load matches the fractional load") {
  Instance instance = four_job_fixture();
  ScheduleMatrix fractional = four_job_schedule();
  LoadProfile target = aggregate_load(instance, fractional);

  const int n = 10000;
  std::vector<double> sum(3, 0.0), sum_sq(3, 0.0);
  for (int seed = 0; seed < n; ++seed) {
    ScheduleMatrix rounded =
        round_schedule(fractional, {RoundingMode::Randomized, static_cast<uint64_t>(seed)});
    LoadProfile load = aggregate_load(instance, rounded);
    for (int t = 1; t <= 3; ++t) {
      sum[static_cast<size_t>(t - 1)] += load.at(t);
      sum_sq[static_cast<size_t>(t - 1)] += load.at(t) * load.at(t);
    }
  }
  for (int t = 1; t <= 3; ++t) {
    double mean = sum[static_cast<size_t>(t - 1)] / n;
    double var = (sum_sq[static_cast<size_t>(t - 1)] - n * mean * mean) / (n - 1);
    double se = std::sqrt(std::max(var, 1e-12) / n);
    CHECK(std::abs(mean - target.at(t)) <= 3 * se);
  }
}

TEST_CASE("rows must sum to one") {
  ScheduleMatrix bad = matrix_from_rows({{0.5, 0.4, 0.0}}, 3);
  CHECK_THROWS_AS(round_schedule(bad, {RoundingMode::Randomized, 1}), InvalidArgument);
}

TEST_CASE("per-job draws are independent of other rows") {
  ScheduleMatrix a = matrix_from_rows({{0.5, 0.5}, {0.3, 0.7}, {0.2, 0.8}}, 2);
  ScheduleMatrix b = a;
  b.at(1, 1) = 0.9;  // change only row 1
  b.at(1, 2) = 0.1;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    RoundingConfig cfg{RoundingMode::Randomized, seed};
    ScheduleMatrix ra = round_schedule(a, cfg);
    ScheduleMatrix rb = round_schedule(b, cfg);
    for (int j : {0, 2})
      for (int t = 1; t <= 2; ++t) CHECK(ra.at(j, t) == rb.at(j, t));
  }
}

TEST_SUITE_END();
