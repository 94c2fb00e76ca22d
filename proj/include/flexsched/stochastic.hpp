#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "flexsched/adjust.hpp"
#include "flexsched/rounding.hpp"
#include "flexsched/solver.hpp"
#include "flexsched/types.hpp"

namespace flexsched {

enum class RenewableKind { TruncatedGaussianIID };

// Stationary i.i.d. per-slot renewable output, Gaussian truncated to
// [lo, hi] by inverse-CDF (samples land inside the support exactly).
struct RenewableModel {
  RenewableKind kind = RenewableKind::TruncatedGaussianIID;
  double mean = 0.66;  // MW
  double stddev = 0.11;
  double lo = 0.0;
  double hi = 2.76;
  uint64_t seed = 0;

  double sample(uint64_t draw_seed, uint64_t sample_index, int slot) const;
  void validate() const;
};

enum class StochasticCostKind { ExpectedShortfall, UserDefinedSampler };

struct StochasticCost {
  StochasticCostKind kind = StochasticCostKind::ExpectedShortfall;
  RenewableModel renewable;
  // UserDefinedSampler: per-sample cost of a load profile; must be convex in
  // the load for the guarantees to apply.
  std::function<double(const LoadProfile&, uint64_t sample_index)> user_sampler;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

// Unbiased sample mean of sum_t (L(t) - R(t))_+ over i.i.d. renewable draws
// (or of the user sampler); deterministic given the seed.
MonteCarloEstimate monte_carlo_cost(const LoadProfile& load, const StochasticCost& cost,
                                    int n_samples, uint64_t seed);

// RAR on the quadratic surrogate sum_t L(t)^2: under time-invariant costs and
// generalized monotonicity the surrogate relaxation optima coincide with the
// true ones, so the expectation never needs to be evaluated.
std::pair<ScheduleMatrix, LoadProfile> modified_rar(const Instance& instance,
                                                    const SolverConfig& solver_config,
                                                    const RoundingConfig& rounding_config);

// Comparison arm: estimate the per-slot expected cost by a fixed sample set
// drawn once, solve the resulting piecewise-linear relaxation, then adjust
// and round as usual.
ScheduleMatrix baseline_saa_rar(const Instance& instance, const StochasticCost& cost,
                                int n_samples, const SolverConfig& solver_config,
                                const RoundingConfig& rounding_config, uint64_t seed);

}  // namespace flexsched
