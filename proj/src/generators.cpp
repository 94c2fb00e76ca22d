#include "flexsched/generators.hpp"

#include <algorithm>
#include <cmath>

#include "flexsched/rng.hpp"

namespace flexsched {

Instance generate_synthetic(const SyntheticConfig& config, uint64_t seed) {
  if (config.num_jobs < 0 || config.horizon < 1)
    throw InfeasibleConfig("synthetic: num_jobs >= 0 and horizon >= 1 required");
  if (config.duration_min < 1 || config.duration_min > config.duration_max)
    throw InfeasibleConfig("synthetic: bad duration range");
  if (config.duration_max > config.horizon)
    throw InfeasibleConfig("synthetic: duration_max exceeds horizon");
  if (config.power_min < 0 || config.power_min > config.power_max)
    throw InfeasibleConfig("synthetic: bad power range");
  if (config.window_slack_max < 0)
    throw InfeasibleConfig("synthetic: bad window slack");

  RngStream root(seed);
  RngStream job_rng = root.fork("instance");

  Instance instance;
  instance.horizon = config.horizon;
  instance.jobs.reserve(static_cast<size_t>(config.num_jobs));
  for (int j = 0; j < config.num_jobs; ++j) {
    RngStream rj = job_rng.fork(static_cast<uint64_t>(j));
    int d = rj.uniform_int(config.duration_min, config.duration_max);
    int slack = rj.uniform_int(0, std::min(config.window_slack_max, config.horizon - d));
    int window = d + slack;
    int arrival = rj.uniform_int(1, config.horizon - window + 1);
    int deadline = arrival + window - 1;
    Job job;
    if (config.shape == ShapeKind::Rectangular) {
      job = Job::rectangular(j, rj.uniform(config.power_min, config.power_max), d,
                             arrival, deadline);
    } else {
      std::vector<double> shape(static_cast<size_t>(d));
      for (double& p : shape) p = rj.uniform(config.power_min, config.power_max);
      job = Job::realistic(j, std::move(shape), arrival, deadline);
    }
    instance.jobs.push_back(std::move(job));
  }

  const double load_max = std::max(1e-9, instance.load_upper_bound());
  double target_max = 0.0;
  if (config.renewable_fraction > 0 && instance.total_energy() > 0) {
    // Midday bell with 50%-of-mean noise, clipped at zero, then scaled so the
    // total matches the requested fraction of the aggregate job energy.
    RngStream ren_rng = root.fork("renewable");
    const int T = config.horizon;
    std::vector<double> r(static_cast<size_t>(T));
    const double mean_level = 1.0;
    double sum = 0.0;
    for (int t = 1; t <= T; ++t) {
      double bell = std::sin(M_PI * (t - 0.5) / T);
      double v = ren_rng.normal(mean_level * bell * bell, 0.5 * mean_level);
      r[static_cast<size_t>(t - 1)] = std::max(0.0, v);
      sum += r[static_cast<size_t>(t - 1)];
    }
    double want = config.renewable_fraction * instance.total_energy();
    if (sum <= 0) {
      r.assign(static_cast<size_t>(T), want / T);
    } else {
      for (double& v : r) v *= want / sum;
    }
    instance.renewable = std::move(r);
    for (double v : instance.renewable) target_max = std::max(target_max, v);
  }

  switch (config.cost_kind) {
    case CostKind::QuadraticTracking:
      instance.cost = CostModel::quadratic_tracking(load_max, target_max);
      break;
    case CostKind::QuadraticPure:
      instance.cost = CostModel::quadratic_pure(load_max);
      break;
    case CostKind::Linear: {
      // mildly time-varying slopes keep linear instances non-degenerate
      RngStream c_rng = root.fork("cost");
      std::vector<double> slopes(static_cast<size_t>(config.horizon));
      for (double& s : slopes) s = c_rng.uniform(0.5, 2.0);
      instance.cost = CostModel::linear(std::move(slopes), load_max);
      break;
    }
    case CostKind::PiecewiseLinear: {
      std::vector<double> slopes = {0.0, 1.0, 3.0};
      std::vector<double> intercepts = {0.0, -0.3 * load_max, -1.3 * load_max};
      instance.cost =
          CostModel::piecewise_linear(std::move(slopes), std::move(intercepts), load_max);
      break;
    }
  }
  instance.validate();
  return instance;
}

Instance generate_adversarial(int N, int T) {
  if (N < 1 || T < 2) throw InvalidArgument("adversarial: need N >= 1 and T >= 2");
  Instance instance;
  instance.horizon = T;
  const int J = N * T;
  instance.jobs.reserve(static_cast<size_t>(J));
  for (int j = 0; j < J; ++j) instance.jobs.push_back(Job::rectangular(j, 1.0, 1, 1, T));
  instance.cost = CostModel::quadratic_pure(static_cast<double>(J));
  instance.validate();
  return instance;
}

}  // namespace flexsched
