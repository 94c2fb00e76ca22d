#include "flexsched/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace flexsched {

double Job::max_power() const {
  double m = 0.0;
  for (double p : power_shape) m = std::max(m, p);
  return m;
}

double Job::total_energy() const {
  return std::accumulate(power_shape.begin(), power_shape.end(), 0.0);
}

void Job::validate(int horizon) const {
  if (duration < 1)
    throw InvalidArgument("job " + std::to_string(id) + ": duration must be >= 1");
  if (!(1 <= arrival && arrival + duration - 1 <= deadline && deadline <= horizon))
    throw InvalidArgument("job " + std::to_string(id) +
                          ": window [" + std::to_string(arrival) + "," +
                          std::to_string(deadline) + "] with duration " +
                          std::to_string(duration) + " infeasible for horizon " +
                          std::to_string(horizon));
  if (static_cast<int>(power_shape.size()) != duration)
    throw InvalidArgument("job " + std::to_string(id) +
                          ": power_shape length must equal duration");
  for (double p : power_shape)
    if (!(p >= 0.0))
      throw InvalidArgument("job " + std::to_string(id) + ": negative power entry");
  if (shape_kind == ShapeKind::Rectangular) {
    for (double p : power_shape)
      if (p != power_shape.front())
        throw InvalidArgument("job " + std::to_string(id) +
                              ": rectangular shape entries must be equal");
  }
}

Job Job::rectangular(int id, double power, int duration, int arrival, int deadline) {
  Job j;
  j.id = id;
  j.power_shape.assign(static_cast<size_t>(duration), power);
  j.duration = duration;
  j.arrival = arrival;
  j.deadline = deadline;
  j.shape_kind = ShapeKind::Rectangular;
  return j;
}

Job Job::realistic(int id, std::vector<double> shape, int arrival, int deadline) {
  Job j;
  j.id = id;
  j.duration = static_cast<int>(shape.size());
  j.power_shape = std::move(shape);
  j.arrival = arrival;
  j.deadline = deadline;
  j.shape_kind = ShapeKind::Realistic;
  return j;
}

double CostModel::slot_cost(double load, double target, int slot) const {
  switch (kind) {
    case CostKind::QuadraticTracking: {
      double d = load - target;
      return d * d;
    }
    case CostKind::QuadraticPure:
      return load * load;
    case CostKind::Linear: {
      double c = linear_slopes.size() == 1 ? linear_slopes[0]
                                           : linear_slopes[static_cast<size_t>(slot) - 1];
      return c * load;
    }
    case CostKind::PiecewiseLinear: {
      double best = -HUGE_VAL;
      for (size_t i = 0; i < pwl_slopes.size(); ++i)
        best = std::max(best, pwl_slopes[i] * load + pwl_intercepts[i]);
      return best;
    }
  }
  return 0.0;
}

double CostModel::slot_derivative(double load, double target, int slot, bool* kink) const {
  if (kink) *kink = false;
  switch (kind) {
    case CostKind::QuadraticTracking:
      return 2.0 * (load - target);
    case CostKind::QuadraticPure:
      return 2.0 * load;
    case CostKind::Linear:
      return linear_slopes.size() == 1 ? linear_slopes[0]
                                       : linear_slopes[static_cast<size_t>(slot) - 1];
    case CostKind::PiecewiseLinear: {
      // Active piece(s) at load: slope of the max; at ties, midpoint of the
      // active-slope interval.
      double best = -HUGE_VAL, lo = 0.0, hi = 0.0;
      const double tol = 1e-12 * (1.0 + std::abs(load));
      for (size_t i = 0; i < pwl_slopes.size(); ++i) {
        double v = pwl_slopes[i] * load + pwl_intercepts[i];
        if (v > best + tol) {
          best = v;
          lo = hi = pwl_slopes[i];
        } else if (v >= best - tol) {
          lo = std::min(lo, pwl_slopes[i]);
          hi = std::max(hi, pwl_slopes[i]);
          best = std::max(best, v);
        }
      }
      if (hi - lo > 1e-15) {
        if (kink) *kink = true;
        return 0.5 * (lo + hi);
      }
      return lo;
    }
  }
  return 0.0;
}

double CostModel::slot_min_over(double lo, double hi, double target, int slot) const {
  switch (kind) {
    case CostKind::QuadraticTracking: {
      double x = std::clamp(target, lo, hi);
      double d = x - target;
      return d * d;
    }
    case CostKind::QuadraticPure: {
      double x = std::clamp(0.0, lo, hi);
      return x * x;
    }
    case CostKind::Linear: {
      double c = linear_slopes.size() == 1 ? linear_slopes[0]
                                           : linear_slopes[static_cast<size_t>(slot) - 1];
      return c * (c >= 0 ? lo : hi);
    }
    case CostKind::PiecewiseLinear: {
      double best = std::min(slot_cost(lo, target, slot), slot_cost(hi, target, slot));
      // Interior minimum sits at an intersection of a negative-slope piece
      // with a non-negative-slope one.
      for (size_t i = 0; i < pwl_slopes.size(); ++i) {
        if (pwl_slopes[i] >= 0) continue;
        for (size_t k = 0; k < pwl_slopes.size(); ++k) {
          if (pwl_slopes[k] < 0 || pwl_slopes[k] == pwl_slopes[i]) continue;
          double x = (pwl_intercepts[i] - pwl_intercepts[k]) /
                     (pwl_slopes[k] - pwl_slopes[i]);
          if (x > lo && x < hi) best = std::min(best, slot_cost(x, target, slot));
        }
      }
      return best;
    }
  }
  return 0.0;
}

void CostModel::validate() const {
  if (load_max < 0) throw InvalidArgument("cost: load_max must be >= 0");
  if (kind == CostKind::Linear && linear_slopes.empty())
    throw InvalidArgument("cost: linear kind requires slopes");
  if (kind == CostKind::PiecewiseLinear) {
    if (pwl_slopes.empty() || pwl_slopes.size() != pwl_intercepts.size())
      throw InvalidArgument("cost: piecewise-linear pieces malformed");
  }
}

CostModel CostModel::quadratic_tracking(double load_max, double target_max) {
  CostModel c;
  c.kind = CostKind::QuadraticTracking;
  c.load_max = load_max;
  c.lipschitz = 2.0 * (load_max + std::abs(target_max));
  return c;
}

CostModel CostModel::quadratic_pure(double load_max) {
  CostModel c;
  c.kind = CostKind::QuadraticPure;
  c.load_max = load_max;
  c.lipschitz = 2.0 * load_max;
  return c;
}

CostModel CostModel::linear(std::vector<double> slopes, double load_max) {
  CostModel c;
  c.kind = CostKind::Linear;
  c.linear_slopes = std::move(slopes);
  c.load_max = load_max;
  c.lipschitz = 0.0;
  for (double s : c.linear_slopes) c.lipschitz = std::max(c.lipschitz, std::abs(s));
  return c;
}

CostModel CostModel::piecewise_linear(std::vector<double> slopes,
                                      std::vector<double> intercepts, double load_max) {
  CostModel c;
  c.kind = CostKind::PiecewiseLinear;
  c.pwl_slopes = std::move(slopes);
  c.pwl_intercepts = std::move(intercepts);
  c.load_max = load_max;
  c.lipschitz = 0.0;
  for (double s : c.pwl_slopes) c.lipschitz = std::max(c.lipschitz, std::abs(s));
  c.validate();
  return c;
}

CostModel CostModel::sample_average_shortfall(std::vector<double> samples,
                                              double load_max) {
  if (samples.empty()) throw InvalidArgument("shortfall cost: no samples");
  std::sort(samples.begin(), samples.end());
  const int n = static_cast<int>(samples.size());
  std::vector<double> slopes, intercepts;
  slopes.reserve(n + 1);
  intercepts.reserve(n + 1);
  double prefix = 0.0;
  for (int k = 0; k <= n; ++k) {
    // piece active when exactly k samples lie below L
    slopes.push_back(static_cast<double>(k) / n);
    intercepts.push_back(-prefix / n);
    if (k < n) prefix += samples[static_cast<size_t>(k)];
  }
  return piecewise_linear(std::move(slopes), std::move(intercepts), load_max);
}

int ScheduleMatrix::fractional_count() const {
  int n = 0;
  for (double v : entries)
    if (is_fractional(v)) ++n;
  return n;
}

int ScheduleMatrix::fractional_count_row(int job) const {
  int n = 0;
  for (int t = 1; t <= horizon; ++t)
    if (is_fractional(at(job, t))) ++n;
  return n;
}

void ScheduleMatrix::snap() {
  for (double& v : entries) {
    if (std::abs(v) <= integrality_tolerance)
      v = 0.0;
    else if (std::abs(v - 1.0) <= integrality_tolerance)
      v = 1.0;
  }
}

ScheduleMatrix ScheduleMatrix::zeros(int num_jobs, int horizon, double tol) {
  ScheduleMatrix s;
  s.num_jobs = num_jobs;
  s.horizon = horizon;
  s.integrality_tolerance = tol;
  s.entries.assign(static_cast<size_t>(num_jobs) * horizon, 0.0);
  return s;
}

ScheduleMatrix ScheduleMatrix::from_starts(const std::vector<int>& starts, int horizon,
                                           double tol) {
  ScheduleMatrix s = zeros(static_cast<int>(starts.size()), horizon, tol);
  for (size_t j = 0; j < starts.size(); ++j) {
    if (starts[j] < 1 || starts[j] > horizon)
      throw InvalidArgument("start out of horizon for job row " + std::to_string(j));
    s.at(static_cast<int>(j), starts[j]) = 1.0;
  }
  return s;
}

std::vector<int> ScheduleMatrix::to_starts() const {
  std::vector<int> starts(static_cast<size_t>(num_jobs), 0);
  for (int j = 0; j < num_jobs; ++j) {
    int chosen = 0;
    for (int t = 1; t <= horizon; ++t) {
      double v = at(j, t);
      if (std::abs(v - 1.0) <= integrality_tolerance) {
        chosen = t;
        break;
      }
      if (is_fractional(v))
        throw InvalidArgument("to_starts: fractional entry at job row " +
                              std::to_string(j));
    }
    if (chosen == 0)
      throw InvalidArgument("to_starts: job row " + std::to_string(j) + " has no start");
    starts[static_cast<size_t>(j)] = chosen;
  }
  return starts;
}

int Instance::max_duration() const {
  int d = 0;
  for (const Job& j : jobs) d = std::max(d, j.duration);
  return d;
}

double Instance::max_power_duration_product() const {
  double m = 0.0;
  for (const Job& j : jobs) m = std::max(m, j.max_power() * j.duration);
  return m;
}

double Instance::max_shape_l1() const {
  double m = 0.0;
  for (const Job& j : jobs) m = std::max(m, j.total_energy());
  return m;
}

double Instance::total_energy() const {
  double e = 0.0;
  for (const Job& j : jobs) e += j.total_energy();
  return e;
}

double Instance::load_upper_bound() const {
  double ub = 0.0;
  for (const Job& j : jobs) ub += j.max_power();
  return ub;
}

void Instance::validate() const {
  if (horizon < 1) throw InvalidArgument("instance: horizon must be >= 1");
  for (const Job& j : jobs) j.validate(horizon);
  if (!renewable.empty()) {
    if (static_cast<int>(renewable.size()) != horizon)
      throw InvalidArgument("instance: renewable length must equal horizon");
    for (double r : renewable)
      if (!(r >= 0.0)) throw InvalidArgument("instance: renewable entries must be >= 0");
  }
  cost.validate();
}

std::string to_string(ShapeKind kind) {
  return kind == ShapeKind::Rectangular ? "rectangular" : "realistic";
}

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::QuadraticTracking: return "quadratic_tracking";
    case CostKind::Linear: return "linear";
    case CostKind::PiecewiseLinear: return "piecewise_linear";
    case CostKind::QuadraticPure: return "quadratic_pure";
  }
  return "?";
}

ShapeKind shape_kind_from_string(const std::string& s) {
  if (s == "rectangular") return ShapeKind::Rectangular;
  if (s == "realistic") return ShapeKind::Realistic;
  throw InvalidArgument("unknown shape kind: " + s);
}

CostKind cost_kind_from_string(const std::string& s) {
  if (s == "quadratic_tracking") return CostKind::QuadraticTracking;
  if (s == "linear") return CostKind::Linear;
  if (s == "piecewise_linear") return CostKind::PiecewiseLinear;
  if (s == "quadratic_pure") return CostKind::QuadraticPure;
  throw InvalidArgument("unknown cost kind: " + s);
}

}  // namespace flexsched
