#include <doctest.h>

#include <cmath>

#include "flexsched/adjust.hpp"
#include "flexsched/generators.hpp"
#include "flexsched/model.hpp"
#include "test_helpers.hpp"

using namespace flexsched;
using namespace flexsched::testing;

TEST_SUITE_BEGIN("adjust");

TEST_CASE("find_cycle: triangle, parallel edges, star") {
  DurationMultigraph g;
  g.duration = 1;
  g.horizon = 3;
  g.edges = {{1, 2, 1}, {2, 3, 2}, {1, 3, 3}};
  auto cycle = find_cycle(g);
  REQUIRE(cycle.has_value());
  CHECK(cycle->size() == 3);
  // consecutive edges share a node
  for (size_t i = 0; i < cycle->size(); ++i) {
    const auto& cur = (*cycle)[i];
    const auto& nxt = (*cycle)[(i + 1) % cycle->size()];
    int head = cur.forward ? cur.edge.to : cur.edge.from;
    int tail = nxt.forward ? nxt.edge.from : nxt.edge.to;
    CHECK(head == tail);
  }

  DurationMultigraph parallel;
  parallel.duration = 1;
  parallel.horizon = 2;
  parallel.edges = {{1, 2, 1}, {1, 2, 2}};
  auto two = find_cycle(parallel);
  REQUIRE(two.has_value());
  CHECK(two->size() == 2);

  DurationMultigraph star;
  star.duration = 1;
  star.horizon = 4;
  star.edges = {{1, 2, 1}, {1, 3, 1}, {1, 4, 1}};
  CHECK(!find_cycle(star).has_value());
}

TEST_CASE("two-edge cycle cancels a fractional entry on the four-job fixture") {
  Instance instance = four_job_fixture();
  AdjustOptions opts;
  opts.max_steps = 1;
  auto [after, report] = adjust_rectangular(instance, four_job_schedule(), opts);
  REQUIRE(report.steps == 1);
  REQUIRE(report.trace.size() == 1);
  // first cycle is the parallel pair between slots 1 and 2 (jobs 1 and 3)
  CHECK(report.trace[0].jobs == std::vector<int>{0, 2});
  CHECK(report.trace[0].delta == doctest::Approx(1.0 / 8));
  CHECK(after.at(2, 2) == 0.0);  // s_3(2) went integral
  CHECK(max_abs_diff(aggregate_load(instance, after),
                     aggregate_load(instance, four_job_schedule())) == 0.0);
}

TEST_CASE("four-job fixture: one cancellation integralizes job 2's row") {
  Instance instance = four_job_fixture();
  ScheduleMatrix before = four_job_schedule();
  auto [after, report] = adjust_rectangular(instance, before);

  CHECK(max_abs_diff(aggregate_load(instance, after), aggregate_load(instance, before)) <=
        1e-12);
  CHECK(report.fractional_after <= 2 * 1 * 3);
  CHECK(check_feasibility(instance, after, false).feasible());

  bool job2_in_one_step = false;
  for (const AdjustStep& step : report.trace) {
    int hits = 0;
    for (auto [job, slot] : step.integralized)
      if (job == 1 && (slot == 2 || slot == 3)) ++hits;
    if (hits >= 2) job2_in_one_step = true;
  }
  CHECK(job2_in_one_step);
  CHECK(after.fractional_count_row(1) == 0);
}

TEST_CASE("integral input is returned unchanged") {
  Instance instance = four_job_fixture();
  ScheduleMatrix integral = ScheduleMatrix::from_starts({1, 2, 3, 2}, 3);
  auto [after, report] = adjust_rectangular(instance, integral);
  CHECK(report.steps == 0);
  CHECK(report.fractional_before == 0);
  CHECK(after.entries == integral.entries);

  Instance shaped = shaped_fixture();
  ScheduleMatrix shaped_integral = ScheduleMatrix::from_starts({1, 2, 3, 1}, 4);
  auto [after2, report2] = adjust_realistic(shaped, shaped_integral);
  CHECK(report2.steps == 0);
  CHECK(after2.entries == shaped_integral.entries);
}

TEST_CASE("rectangular battery: losslessness, bound, feasibility, progress") {
  RngStream rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    SyntheticConfig cfg;
    cfg.num_jobs = 50;
    cfg.horizon = 12;
    cfg.duration_max = 3;
    Instance instance = generate_synthetic(cfg, 900 + trial);
    ScheduleMatrix before = random_fractional_schedule(instance, rng.fork(trial));
    LoadProfile load_before = aggregate_load(instance, before);
    double cost_before = evaluate_cost(instance, load_before);

    auto [after, report] = adjust_rectangular(instance, before);
    LoadProfile load_after = aggregate_load(instance, after);

    double scale = 0.0;
    for (double v : load_before.values) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(load_before, load_after) <= 1e-8);
    CHECK(report.max_load_deviation <= 1e-10 * std::max(1.0, scale));
    double cost_after = evaluate_cost(instance, load_after);
    CHECK(std::abs(cost_after - cost_before) <= 1e-8 * std::max(1.0, cost_before));
    CHECK(report.fractional_after <= 2 * instance.max_duration() * instance.horizon);
    CHECK(check_feasibility(instance, after, false).feasible());
    CHECK(report.fractional_after <= report.fractional_before);
    for (const AdjustStep& step : report.trace) {
      CHECK(step.delta > 0.0);
      CHECK(!step.integralized.empty());
    }
  }
}

TEST_CASE("adjust_rectangular rejects realistic shapes and bad input") {
  Instance shaped = shaped_fixture();
  CHECK_THROWS_AS(adjust_rectangular(shaped, shaped_schedule()), NotRectangular);

  Instance instance = four_job_fixture();
  ScheduleMatrix bad = four_job_schedule();
  bad.at(0, 1) += 0.5;
  CHECK_THROWS_AS(adjust_rectangular(instance, bad), InfeasibleInput);
}

TEST_CASE("shape-general worked example: pair (1,3), xi ~ [1,-3,2], step 1/8") {
  Instance instance = shaped_fixture();
  AdjustOptions opts;
  opts.max_steps = 1;
  auto [after, report] = adjust_realistic(instance, shaped_schedule(), opts);

  REQUIRE(report.trace.size() == 1);
  const AdjustStep& step = report.trace[0];
  CHECK(step.pair_t == 1);
  CHECK(step.pair_t2 == 3);
  CHECK(step.jobs == std::vector<int>{0, 1, 2});

  // xi proportional to [1, -3, 2]; delta * xi is the scale-free update
  REQUIRE(step.xi.size() == 3);
  double ratio = 1.0 / step.xi[0];
  CHECK(step.xi[1] * ratio == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(step.xi[2] * ratio == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(step.delta / ratio == doctest::Approx(1.0 / 8).epsilon(1e-12));

  const std::vector<std::vector<double>> expected = {
      {1.0 / 4, 0.0, 1.0 / 2, 1.0 / 4},
      {9.0 / 40, 0.0, 31.0 / 40, 0.0},
      {1.0 / 2, 1.0 / 2, 0.0, 0.0},
      {2.0 / 5, 0.0, 3.0 / 5, 0.0}};
  for (int j = 0; j < 4; ++j)
    for (int t = 1; t <= 4; ++t)
      CHECK(after.at(j, t) ==
            doctest::Approx(expected[static_cast<size_t>(j)][static_cast<size_t>(t - 1)])
                .epsilon(1e-12));
  CHECK(after.at(2, 3) == 0.0);  // s_3(3) became integral

  CHECK(max_abs_diff(aggregate_load(instance, after),
                     aggregate_load(instance, shaped_schedule())) <= 1e-12);
}

TEST_CASE("shape-general adjustment terminates under the pair bound") {
  Instance instance = shaped_fixture();
  auto [after, report] = adjust_realistic(instance, shaped_schedule());
  CHECK(report.fractional_after <=
        instance.max_duration() * instance.horizon * (instance.horizon - 1));
  CHECK(max_abs_diff(aggregate_load(instance, after),
                     aggregate_load(instance, shaped_schedule())) <= 1e-12);
  CHECK(check_feasibility(instance, after, false).feasible());

  RngStream rng(555);
  for (int trial = 0; trial < 8; ++trial) {
    SyntheticConfig cfg;
    cfg.num_jobs = 40;
    cfg.horizon = 10;
    cfg.duration_max = 3;
    cfg.shape = ShapeKind::Realistic;
    Instance inst = generate_synthetic(cfg, 40 + trial);
    ScheduleMatrix before = random_fractional_schedule(inst, rng.fork(trial));
    LoadProfile load_before = aggregate_load(inst, before);
    auto [adj, rep] = adjust_realistic(inst, before);
    CHECK(max_abs_diff(load_before, aggregate_load(inst, adj)) <= 1e-8);
    CHECK(rep.fractional_after <= inst.max_duration() * inst.horizon * (inst.horizon - 1));
    CHECK(check_feasibility(inst, adj, false).feasible());
    for (const AdjustStep& step : rep.trace) {
      CHECK(step.delta > 0.0);
      CHECK(!step.integralized.empty());
      double scale = 0.0;
      for (double v : load_before.values) scale = std::max(scale, std::abs(v));
      CHECK(step.load_deviation <= 1e-10 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("pair update never fires with fewer than D qualifying jobs") {
  Instance instance = shaped_fixture();  // D = 3
  ScheduleMatrix s = matrix_from_rows({{0.5, 0.0, 0.5, 0.0},
                                       {0.4, 0.0, 0.6, 0.0},
                                       {0.0, 1.0, 0.0, 0.0},
                                       {0.0, 0.0, 1.0, 0.0}},
                                      4);
  auto [after, report] = adjust_realistic(instance, s);
  CHECK(report.steps == 0);
  CHECK(after.entries == s.entries);
}

TEST_CASE("null_vector") {
  auto xi = null_vector({{1, 1, 1}, {0, 2, 3}});
  REQUIRE(xi.size() == 3);
  double ratio = 1.0 / xi[0];
  CHECK(xi[1] * ratio == doctest::Approx(-3.0));
  CHECK(xi[2] * ratio == doctest::Approx(2.0));

  // duplicated columns admit a +/- pair in the null space; any valid output
  // must zero the matrix
  auto dup = null_vector({{2, 5, 2}, {1, 4, 1}});
  double res = 0.0;
  for (auto row : {std::vector<double>{2, 5, 2}, std::vector<double>{1, 4, 1}}) {
    double dot = 0.0;
    for (size_t i = 0; i < 3; ++i) dot += row[i] * dup[i];
    res = std::max(res, std::abs(dot));
  }
  CHECK(res <= 1e-10);

  RngStream rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<double>> m(3, std::vector<double>(4));
    double scale = 0.0;
    for (auto& row : m)
      for (double& v : row) {
        v = rng.uniform(-5.0, 5.0);
        scale = std::max(scale, std::abs(v));
      }
    auto x = null_vector(m);
    double norm = 0.0;
    for (double v : x) norm = std::max(norm, std::abs(v));
    CHECK(norm == doctest::Approx(1.0));
    for (const auto& row : m) {
      double dot = 0.0;
      for (size_t i = 0; i < 4; ++i) dot += row[i] * x[i];
      CHECK(std::abs(dot) <= 1e-10 * std::max(1.0, scale));
    }
  }
}

// Negative control: an adjustment that overshoots Delta* (the per-edge bound
// of one edge is ignored) must be caught by the feasibility check.
TEST_CASE("broken cancellation is caught by check_feasibility") {
  Instance instance = four_job_fixture();
  ScheduleMatrix s = four_job_schedule();
  // cycle jobs 1 and 3 between slots 1 and 2, but with Delta from job 1 only
  double delta = s.at(0, 1);  // 3/8 > the correct 1/8 bound from s_3(2)
  s.at(0, 1) -= delta;
  s.at(0, 2) += delta;
  s.at(2, 2) -= delta;  // drives s_3(2) negative
  s.at(2, 1) += delta;
  auto report = check_feasibility(instance, s, false);
  REQUIRE(!report.feasible());
  bool box = false;
  for (const auto& v : report.violations) box |= v.kind == "box";
  CHECK(box);
}

TEST_SUITE_END();
