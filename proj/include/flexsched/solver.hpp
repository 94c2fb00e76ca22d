#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "flexsched/model.hpp"
#include "flexsched/types.hpp"

namespace flexsched {

enum class SolveMethod { ProjectedGradient, ConditionalGradient };

struct SolverConfig {
  int max_iterations = 20000;
  // Relative gap target: the solve stops once the duality-gap certificate is
  // below gap_tolerance * max(1, Phi(L0)).
  double gap_tolerance = 1e-7;
  // Default: projected gradient, except conditional gradient for
  // piecewise-linear costs (no gradient Lipschitz constant needed there).
  std::optional<SolveMethod> method;
  double initial_step = 1.0;
  double backtrack_shrink = 0.5;
  double step_grow = 1.3;
  bool strict = true;  // throw NotConverged instead of returning the best iterate
  std::function<void(int iteration, double objective, double gap)> on_iteration;
};

struct RelaxSolution {
  ScheduleMatrix schedule;  // fractional s^R, feasible for the relaxation
  LoadProfile load;         // L^R
  PriceVector prices;       // lambda(t) = phi_t'(L^R(t))
  double objective = 0.0;   // Phi(L^R)
  double gap_certificate = 0.0;  // max_{s'} <grad Phi(L^R), L^R - L(s')>
  int iterations = 0;
  bool converged = false;
};

struct NotConverged : Error {
  NotConverged(const std::string& msg, RelaxSolution best)
      : Error(msg), solution(std::move(best)) {}
  RelaxSolution solution;
};

// Solves the box relaxation of the start-time program to the configured gap
// certificate. The certificate is computed by per-job linear minimization of
// the price-weighted placement cost over each admissible-start simplex.
RelaxSolution solve_relaxation(const Instance& instance, const SolverConfig& config = {});

// lambda(t) = d phi_t / dL at L(t); piecewise-linear kinks are reported via
// PriceVector::kink_slots with the subgradient-interval midpoint as the value.
PriceVector marginal_prices(const Instance& instance, const LoadProfile& load);

// Euclidean projection onto {x >= 0, sum x = 1, supp(x) within support}.
// `support` holds 0-based positions into `weights`; off-support entries are
// exactly 0 in the result.
std::vector<double> simplex_project(const std::vector<double>& weights,
                                    const std::vector<int>& support);

}  // namespace flexsched
