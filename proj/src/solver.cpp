#include "flexsched/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace flexsched {

namespace {

struct Workspace {
  std::vector<std::vector<int>> starts;  // admissible starts per job
  int horizon = 0;

  explicit Workspace(const Instance& instance) : horizon(instance.horizon) {
    starts.reserve(instance.jobs.size());
    for (const Job& job : instance.jobs)
      starts.push_back(admissible_starts(job, instance.horizon));
  }
};

ScheduleMatrix uniform_start(const Instance& instance, const Workspace& ws) {
  ScheduleMatrix s = ScheduleMatrix::zeros(instance.num_jobs(), instance.horizon);
  for (int j = 0; j < s.num_jobs; ++j) {
    const auto& supp = ws.starts[static_cast<size_t>(j)];
    const double w = 1.0 / static_cast<double>(supp.size());
    for (int t : supp) s.at(j, t) = w;
  }
  return s;
}

// beta_j(t) = <lambda, column t of P^(j)> for every admissible start.
void price_weighted_shapes(const Instance& instance, const Workspace& ws,
                           const std::vector<double>& lambda,
                           std::vector<std::vector<double>>& beta) {
  beta.resize(instance.jobs.size());
  for (size_t j = 0; j < instance.jobs.size(); ++j) {
    const Job& job = instance.jobs[j];
    const auto& supp = ws.starts[j];
    beta[j].resize(supp.size());
    for (size_t k = 0; k < supp.size(); ++k) {
      double v = 0.0;
      const int start = supp[k];
      for (int i = 0; i < job.duration; ++i)
        v += lambda[static_cast<size_t>(start + i - 1)] *
             job.power_shape[static_cast<size_t>(i)];
      beta[j][k] = v;
    }
  }
}

// Duality-gap certificate: sum_j (<beta_j, s_j> - min_t beta_j(t)). Lowest
// time index wins ties in the linear minimization oracle.
double frank_wolfe_gap(const Instance& instance, const Workspace& ws,
                       const ScheduleMatrix& s,
                       const std::vector<std::vector<double>>& beta,
                       std::vector<int>* lmo_starts = nullptr) {
  double gap = 0.0;
  if (lmo_starts) lmo_starts->assign(instance.jobs.size(), 0);
  for (size_t j = 0; j < instance.jobs.size(); ++j) {
    const auto& supp = ws.starts[j];
    double inner = 0.0;
    double best = HUGE_VAL;
    int best_t = supp.front();
    for (size_t k = 0; k < supp.size(); ++k) {
      inner += beta[j][k] * s.at(static_cast<int>(j), supp[k]);
      if (beta[j][k] < best) {
        best = beta[j][k];
        best_t = supp[k];
      }
    }
    gap += inner - best;
    if (lmo_starts) (*lmo_starts)[j] = best_t;
  }
  return gap;
}

std::vector<double> gradient_lambda(const Instance& instance, const LoadProfile& load) {
  std::vector<double> lambda(static_cast<size_t>(instance.horizon));
  for (int t = 1; t <= instance.horizon; ++t)
    lambda[static_cast<size_t>(t - 1)] =
        instance.cost.slot_derivative(load.at(t), instance.target(t), t);
  return lambda;
}

RelaxSolution make_solution(const Instance& instance, const Workspace& ws,
                            ScheduleMatrix s, int iterations) {
  RelaxSolution sol;
  sol.load = aggregate_load(instance, s);
  sol.objective = evaluate_cost(instance, sol.load);
  sol.prices = marginal_prices(instance, sol.load);
  std::vector<std::vector<double>> beta;
  price_weighted_shapes(instance, ws, sol.prices.values, beta);
  sol.gap_certificate = frank_wolfe_gap(instance, ws, s, beta);
  sol.schedule = std::move(s);
  sol.iterations = iterations;
  return sol;
}

RelaxSolution solve_projected_gradient(const Instance& instance, const Workspace& ws,
                                       const SolverConfig& config) {
  ScheduleMatrix s = uniform_start(instance, ws);
  LoadProfile load = aggregate_load(instance, s);
  double phi = evaluate_cost(instance, load);
  const double gap_target = config.gap_tolerance * std::max(1.0, phi);

  std::vector<std::vector<double>> beta;
  std::vector<double> row_buf, proj_buf;
  std::vector<int> pos_buf;
  double step = config.initial_step;
  int iter = 0;
  double gap = HUGE_VAL;

  for (; iter < config.max_iterations; ++iter) {
    std::vector<double> lambda = gradient_lambda(instance, load);
    price_weighted_shapes(instance, ws, lambda, beta);
    gap = frank_wolfe_gap(instance, ws, s, beta);
    if (config.on_iteration) config.on_iteration(iter, phi, gap);
    if (gap <= gap_target) break;

    bool accepted = false;
    while (step > 1e-18) {
      ScheduleMatrix cand = s;
      double dist_sq = 0.0;
      double inner = 0.0;
      for (size_t j = 0; j < ws.starts.size(); ++j) {
        const auto& supp = ws.starts[j];
        row_buf.resize(supp.size());
        pos_buf.resize(supp.size());
        std::iota(pos_buf.begin(), pos_buf.end(), 0);
        for (size_t k = 0; k < supp.size(); ++k)
          row_buf[k] = s.at(static_cast<int>(j), supp[k]) - step * beta[j][k];
        proj_buf = simplex_project(row_buf, pos_buf);
        for (size_t k = 0; k < supp.size(); ++k) {
          double diff = proj_buf[k] - s.at(static_cast<int>(j), supp[k]);
          dist_sq += diff * diff;
          inner += beta[j][k] * diff;
          cand.at(static_cast<int>(j), supp[k]) = proj_buf[k];
        }
      }
      LoadProfile cand_load = aggregate_load(instance, cand);
      double cand_phi = evaluate_cost(instance, cand_load);
      // proximal sufficient-decrease test; implies monotone descent
      if (cand_phi <= phi + inner + dist_sq / (2.0 * step)) {
        s = std::move(cand);
        load = std::move(cand_load);
        phi = cand_phi;
        accepted = true;
        break;
      }
      step *= config.backtrack_shrink;
    }
    if (!accepted) break;  // step collapsed; gap is as good as it gets
    step = std::min(step * config.step_grow, 1e4);
  }

  RelaxSolution sol = make_solution(instance, ws, std::move(s), iter);
  sol.converged = sol.gap_certificate <= gap_target;
  return sol;
}

RelaxSolution solve_conditional_gradient(const Instance& instance, const Workspace& ws,
                                         const SolverConfig& config) {
  ScheduleMatrix s = uniform_start(instance, ws);
  LoadProfile load = aggregate_load(instance, s);
  double phi = evaluate_cost(instance, load);
  const double gap_target = config.gap_tolerance * std::max(1.0, phi);

  ScheduleMatrix best = s;
  double best_phi = phi;
  std::vector<std::vector<double>> beta;
  std::vector<int> lmo;
  int iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    std::vector<double> lambda = gradient_lambda(instance, load);
    price_weighted_shapes(instance, ws, lambda, beta);
    double gap = frank_wolfe_gap(instance, ws, s, beta, &lmo);
    if (config.on_iteration) config.on_iteration(iter, phi, gap);
    if (phi < best_phi) {
      best_phi = phi;
      best = s;
    }
    if (gap <= gap_target) break;

    const double gamma = 2.0 / (iter + 2.0);
    for (size_t j = 0; j < ws.starts.size(); ++j) {
      for (int t : ws.starts[j]) {
        double v = s.at(static_cast<int>(j), t) * (1.0 - gamma);
        if (t == lmo[j]) v += gamma;
        s.at(static_cast<int>(j), t) = v;
      }
    }
    load = aggregate_load(instance, s);
    phi = evaluate_cost(instance, load);
  }
  if (phi < best_phi) best = s;

  RelaxSolution sol = make_solution(instance, ws, std::move(best), iter);
  sol.converged = sol.gap_certificate <= gap_target;
  return sol;
}

}  // namespace

RelaxSolution solve_relaxation(const Instance& instance, const SolverConfig& config) {
  instance.validate();
  Workspace ws(instance);
  if (instance.num_jobs() == 0) {
    RelaxSolution sol;
    sol.schedule = ScheduleMatrix::zeros(0, instance.horizon);
    sol.load = LoadProfile(instance.horizon);
    sol.objective = evaluate_cost(instance, sol.load);
    sol.prices = marginal_prices(instance, sol.load);
    sol.converged = true;
    return sol;
  }

  SolveMethod method = config.method.value_or(
      instance.cost.kind == CostKind::PiecewiseLinear ? SolveMethod::ConditionalGradient
                                                      : SolveMethod::ProjectedGradient);
  RelaxSolution sol = method == SolveMethod::ProjectedGradient
                          ? solve_projected_gradient(instance, ws, config)
                          : solve_conditional_gradient(instance, ws, config);
  if (!sol.converged && config.strict)
    throw NotConverged("relaxation gap " + std::to_string(sol.gap_certificate) +
                           " above tolerance after " + std::to_string(sol.iterations) +
                           " iterations",
                       std::move(sol));
  return sol;
}

PriceVector marginal_prices(const Instance& instance, const LoadProfile& load) {
  if (load.horizon() != instance.horizon)
    throw DimensionMismatch("marginal_prices: load length mismatch");
  PriceVector prices;
  prices.values.resize(static_cast<size_t>(instance.horizon));
  for (int t = 1; t <= instance.horizon; ++t) {
    bool kink = false;
    prices.values[static_cast<size_t>(t - 1)] =
        instance.cost.slot_derivative(load.at(t), instance.target(t), t, &kink);
    if (kink) prices.kink_slots.push_back(t);
  }
  return prices;
}

std::vector<double> simplex_project(const std::vector<double>& weights,
                                    const std::vector<int>& support) {
  if (support.empty()) throw InvalidArgument("simplex_project: empty support");
  std::vector<double> vals;
  vals.reserve(support.size());
  for (int idx : support) {
    if (idx < 0 || idx >= static_cast<int>(weights.size()))
      throw InvalidArgument("simplex_project: support index out of range");
    vals.push_back(weights[static_cast<size_t>(idx)]);
  }
  // Held-style threshold: sort descending, find the largest k with
  // v_k > (sum_k - 1)/k, shift by that threshold and clip.
  std::vector<double> sorted = vals;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  int k = 0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0) {
      theta = candidate;
      k = static_cast<int>(i + 1);
    }
  }
  (void)k;
  std::vector<double> out(weights.size(), 0.0);
  for (size_t i = 0; i < support.size(); ++i)
    out[static_cast<size_t>(support[i])] = std::max(0.0, vals[i] - theta);
  return out;
}

}  // namespace flexsched
