#include "flexsched/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "flexsched/model.hpp"
#include "flexsched/pipeline.hpp"
#include "flexsched/rng.hpp"

namespace flexsched {

void RenewableModel::validate() const {
  if (lo > hi) throw InvalidArgument("renewable model: lo > hi");
  if (stddev < 0) throw InvalidArgument("renewable model: stddev < 0");
}

double RenewableModel::sample(uint64_t draw_seed, uint64_t sample_index, int slot) const {
  validate();
  if (stddev == 0.0 || lo == hi) return std::clamp(mean, lo, hi);
  RngStream stream = RngStream(draw_seed)
                         .fork("renewable")
                         .fork(seed)
                         .fork(sample_index)
                         .fork(static_cast<uint64_t>(slot));
  const double a = RngStream::normal_cdf((lo - mean) / stddev);
  const double b = RngStream::normal_cdf((hi - mean) / stddev);
  double u = a + stream.uniform() * (b - a);
  u = std::clamp(u, 1e-16, 1.0 - 1e-16);
  double v = mean + stddev * RngStream::normal_icdf(u);
  return std::clamp(v, lo, hi);
}

MonteCarloEstimate monte_carlo_cost(const LoadProfile& load, const StochasticCost& cost,
                                    int n_samples, uint64_t seed) {
  if (n_samples < 1) throw InvalidArgument("monte_carlo_cost: need n_samples >= 1");
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    double c;
    if (cost.kind == StochasticCostKind::UserDefinedSampler) {
      c = cost.user_sampler(load, static_cast<uint64_t>(i));
    } else {
      c = 0.0;
      for (int t = 1; t <= load.horizon(); ++t) {
        double shortfall =
            load.at(t) - cost.renewable.sample(seed, static_cast<uint64_t>(i), t);
        if (shortfall > 0) c += shortfall;
      }
    }
    sum += c;
    sum_sq += c * c;
  }
  MonteCarloEstimate est;
  est.samples = n_samples;
  est.mean = sum / n_samples;
  if (n_samples > 1) {
    double var = (sum_sq - sum * sum / n_samples) / (n_samples - 1);
    est.std_error = std::sqrt(std::max(0.0, var) / n_samples);
  }
  return est;
}

std::pair<ScheduleMatrix, LoadProfile> modified_rar(const Instance& instance,
                                                    const SolverConfig& solver_config,
                                                    const RoundingConfig& rounding_config) {
  if (!instance.renewable.empty())
    throw InvalidArgument(
        "modified_rar: instance carries a deterministic renewable target; the "
        "stochastic model supplies the uncertainty");
  Instance surrogate = instance;
  surrogate.cost = CostModel::quadratic_pure(std::max(1e-9, instance.load_upper_bound()));
  RarOutput out = run_rar(surrogate, solver_config, rounding_config);
  LoadProfile load = aggregate_load(surrogate, out.integral);
  return {std::move(out.integral), std::move(load)};
}

ScheduleMatrix baseline_saa_rar(const Instance& instance, const StochasticCost& cost,
                                int n_samples, const SolverConfig& solver_config,
                                const RoundingConfig& rounding_config, uint64_t seed) {
  if (n_samples < 1) throw InvalidArgument("baseline_saa_rar: need n_samples >= 1");
  if (cost.kind != StochasticCostKind::ExpectedShortfall)
    throw InvalidArgument("baseline_saa_rar: only the shortfall cost is sampled");
  // One fixed sample set, shared by every slot (the process is stationary).
  std::vector<double> samples(static_cast<size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i)
    samples[static_cast<size_t>(i)] =
        cost.renewable.sample(seed, static_cast<uint64_t>(i), 0);
  Instance saa = instance;
  saa.renewable.clear();
  saa.cost = CostModel::sample_average_shortfall(
      std::move(samples), std::max(1e-9, instance.load_upper_bound()));
  RarOutput out = run_rar(saa, solver_config, rounding_config);
  return std::move(out.integral);
}

}  // namespace flexsched
