#include <doctest.h>

#include <cmath>

#include "flexsched/generators.hpp"
#include "flexsched/model.hpp"
#include "flexsched/pipeline.hpp"
#include "flexsched/rng.hpp"
#include "flexsched/stochastic.hpp"
#include "test_helpers.hpp"

using namespace flexsched;
using namespace flexsched::testing;

TEST_SUITE_BEGIN("stochastic");

namespace {

// Analytic E[(L - R)_+] for R truncated-normal on [a, b] (test oracle).
double analytic_shortfall(double L, double mu, double sigma, double a, double b) {
  if (L <= a) return 0.0;
  auto cdf = RngStream::normal_cdf;
  auto pdf = RngStream::normal_pdf;
  const double alpha = (a - mu) / sigma, beta = (b - mu) / sigma;
  const double Z = cdf(beta) - cdf(alpha);
  if (L >= b) {
    double mean = mu + sigma * (pdf(alpha) - pdf(beta)) / Z;
    return L - mean;
  }
  const double l = (L - mu) / sigma;
  return ((L - mu) * (cdf(l) - cdf(alpha)) + sigma * (pdf(l) - pdf(alpha))) / Z;
}

RenewableModel default_model() {
  RenewableModel m;
  m.mean = 0.66;
  m.stddev = 0.11;
  m.lo = 0.0;
  m.hi = 2.76;
  return m;
}

}  // namespace

TEST_CASE("truncation is respected exactly") {
  RenewableModel model;
  model.mean = 1.0;
  model.stddev = 5.0;  // wide: truncation binds often
  model.lo = 0.5;
  model.hi = 1.5;
  for (int i = 0; i < 2000; ++i) {
    double v = model.sample(7, static_cast<uint64_t>(i), 1);
    CHECK(v >= 0.5);
    CHECK(v <= 1.5);
  }
}

TEST_CASE("monte carlo shortfall basics") {
  StochasticCost cost;
  cost.renewable = default_model();

  LoadProfile zero(4);
  CHECK(monte_carlo_cost(zero, cost, 100, 1).mean == doctest::Approx(0.0));

  StochasticCost degenerate;
  degenerate.renewable = default_model();
  degenerate.renewable.stddev = 0.0;
  degenerate.renewable.lo = 0.0;
  degenerate.renewable.hi = 0.0;
  LoadProfile load({1.0, 2.0, 0.5});
  CHECK(monte_carlo_cost(load, degenerate, 50, 2).mean == doctest::Approx(3.5));

  // deterministic given the seed
  auto a = monte_carlo_cost(load, cost, 500, 42);
  auto b = monte_carlo_cost(load, cost, 500, 42);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("monte carlo agrees with the analytic truncated-normal shortfall") {
  StochasticCost cost;
  cost.renewable = default_model();
  for (double L : {0.3, 0.66, 1.2}) {
    LoadProfile load(std::vector<double>{L});
    auto est = monte_carlo_cost(load, cost, 100000, 9);
    double truth = analytic_shortfall(L, 0.66, 0.11, 0.0, 2.76);
    CHECK(std::abs(est.mean - truth) <= 3 * est.std_error + 1e-12);
  }
}

TEST_CASE("per-slot sample means are stationary") {
  RenewableModel model = default_model();
  const int n = 20000;
  const int T = 4;
  std::vector<double> mean(T, 0.0), var(T, 0.0);
  for (int t = 1; t <= T; ++t) {
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      double v = model.sample(11, static_cast<uint64_t>(i), t);
      sum += v;
      sum_sq += v * v;
    }
    mean[static_cast<size_t>(t - 1)] = sum / n;
    var[static_cast<size_t>(t - 1)] = (sum_sq - sum * sum / n) / (n - 1);
  }
  for (int t = 1; t < T; ++t) {
    double se = std::sqrt(var[0] / n + var[static_cast<size_t>(t)] / n);
    CHECK(std::abs(mean[0] - mean[static_cast<size_t>(t)]) <= 3 * se);
  }
}

TEST_CASE("sample-average shortfall cost matches direct evaluation") {
  RngStream rng(15);
  std::vector<double> samples(40);
  for (double& s : samples) s = rng.uniform(0.0, 3.0);
  CostModel cost = CostModel::sample_average_shortfall(samples, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    double L = rng.uniform(-0.5, 4.0);
    double direct = 0.0;
    for (double s : samples) direct += std::max(0.0, L - s);
    direct /= static_cast<double>(samples.size());
    CHECK(cost.slot_cost(L, 0.0, 1) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("surrogate relaxation of the adversarial instance is uniform") {
  Instance instance = generate_adversarial(2, 3);
  auto [schedule, load] = modified_rar(instance, {}, {RoundingMode::Randomized, 5});
  CHECK(check_feasibility(instance, schedule, true).feasible());
  for (int t = 1; t <= 3; ++t) CHECK(load.at(t) == doctest::Approx(2.0).epsilon(1e-9));

  Instance with_target = instance;
  with_target.renewable = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(modified_rar(with_target, {}, {}), InvalidArgument);
}

TEST_CASE("modified RAR output is integral-feasible regardless of assumptions") {
  SyntheticConfig cfg;
  cfg.num_jobs = 30;
  cfg.horizon = 12;
  cfg.duration_max = 3;  // generalized monotonicity may fail here; feasibility cannot
  cfg.renewable_fraction = 0.0;
  cfg.cost_kind = CostKind::QuadraticPure;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Instance instance = generate_synthetic(cfg, seed);
    auto [schedule, load] = modified_rar(instance, {}, {RoundingMode::Randomized, seed});
    CHECK(check_feasibility(instance, schedule, true).feasible());
  }
}

TEST_CASE("cost equivalence at d_max = 1: surrogate and SAA optima agree") {
  SyntheticConfig cfg;
  cfg.num_jobs = 30;
  cfg.horizon = 8;
  cfg.duration_min = 1;
  cfg.duration_max = 1;
  cfg.power_min = 0.05;
  cfg.power_max = 0.25;
  cfg.renewable_fraction = 0.0;
  cfg.cost_kind = CostKind::QuadraticPure;
  Instance instance = generate_synthetic(cfg, 77);

  StochasticCost cost;
  cost.renewable = default_model();
  cost.renewable.mean = 0.45;
  cost.renewable.stddev = 0.15;
  cost.renewable.hi = 1.2;

  SolverConfig solver;
  solver.gap_tolerance = 1e-9;
  solver.max_iterations = 100000;
  solver.strict = false;

  // relaxation level: the surrogate optimum is also optimal for the
  // sample-average objective
  Instance surrogate = instance;
  surrogate.cost = CostModel::quadratic_pure(instance.load_upper_bound());
  RelaxSolution sur = solve_relaxation(surrogate, solver);

  std::vector<double> samples(800);
  for (size_t i = 0; i < samples.size(); ++i)
    samples[i] = cost.renewable.sample(123, i, 0);
  Instance saa_instance = instance;
  saa_instance.cost =
      CostModel::sample_average_shortfall(samples, instance.load_upper_bound());
  RelaxSolution saa = solve_relaxation(saa_instance, solver);
  double saa_at_surrogate = evaluate_cost(saa_instance, sur.load);
  CHECK(saa_at_surrogate <= saa.objective + 1e-3 * std::max(1.0, saa.objective));

  // end to end: both integral schedules land on comparable true expected costs
  auto [mod_schedule, mod_load] =
      modified_rar(instance, solver, {RoundingMode::Randomized, 3});
  ScheduleMatrix saa_schedule =
      baseline_saa_rar(instance, cost, 800, solver, {RoundingMode::Randomized, 3}, 123);
  LoadProfile saa_load = aggregate_load(instance, saa_schedule);
  auto true_cost = [&](const LoadProfile& load) {
    double total = 0.0;
    for (int t = 1; t <= load.horizon(); ++t)
      total += analytic_shortfall(load.at(t), cost.renewable.mean,
                                  cost.renewable.stddev, cost.renewable.lo,
                                  cost.renewable.hi);
    return total;
  };
  double c_mod = true_cost(mod_load);
  double c_saa = true_cost(saa_load);
  CHECK(std::abs(c_mod - c_saa) <= 0.15 * std::max({c_mod, c_saa, 0.1}));
}

TEST_SUITE_END();
