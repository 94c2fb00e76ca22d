#pragma once

#include <string>
#include <vector>

#include "flexsched/errors.hpp"

namespace flexsched {

// Time slots are 1-indexed, of fixed length 1 hour, so per-slot energy (kWh)
// and average power (kW) share their numeric value. Job rows in matrices are
// 0-indexed by position in Instance::jobs.

enum class ShapeKind { Rectangular, Realistic };

// One non-preemptive load: once started it consumes power_shape[i] in the
// i-th slot after the start, for duration slots, and must fit inside the
// availability window [arrival, deadline].
struct Job {
  int id = 0;
  std::vector<double> power_shape;  // length == duration, entries >= 0
  int duration = 1;
  int arrival = 1;   // t^A, earliest slot the job may occupy
  int deadline = 1;  // t^D, latest slot the job may occupy
  ShapeKind shape_kind = ShapeKind::Rectangular;

  int window_length() const { return deadline + 1 - arrival; }
  int latest_start() const { return deadline - duration + 1; }
  double max_power() const;
  double total_energy() const;  // sum of power_shape

  void validate(int horizon) const;  // throws InvalidArgument

  static Job rectangular(int id, double power, int duration, int arrival, int deadline);
  static Job realistic(int id, std::vector<double> shape, int arrival, int deadline);
};

enum class CostKind { QuadraticTracking, Linear, PiecewiseLinear, QuadraticPure };

// Per-slot convex cost phi_t over the declared load domain [0, load_max].
// QuadraticTracking evaluates (L - R)^2 against the instance renewable target;
// PiecewiseLinear is a max of affine pieces shared across slots.
struct CostModel {
  CostKind kind = CostKind::QuadraticPure;
  std::vector<double> linear_slopes;  // Linear: one entry broadcast, or per slot
  std::vector<double> pwl_slopes;     // PiecewiseLinear pieces, ascending slope
  std::vector<double> pwl_intercepts;
  double load_max = 0.0;   // declared domain upper bound
  double lipschitz = 0.0;  // K over [0, load_max]

  double slot_cost(double load, double target, int slot) const;
  // Derivative of phi_t at load; at piecewise-linear kinks returns the
  // subgradient-interval midpoint and sets *kink.
  double slot_derivative(double load, double target, int slot, bool* kink = nullptr) const;
  // Exact minimum of the convex phi_t over [lo, hi] (used for search pruning).
  double slot_min_over(double lo, double hi, double target, int slot) const;

  void validate() const;

  static CostModel quadratic_tracking(double load_max, double target_max);
  static CostModel quadratic_pure(double load_max);
  static CostModel linear(std::vector<double> slopes, double load_max);
  static CostModel piecewise_linear(std::vector<double> slopes,
                                    std::vector<double> intercepts, double load_max);
  // (1/n) * sum_i (L - sample_i)_+ expressed as a max of affine pieces.
  static CostModel sample_average_shortfall(std::vector<double> samples, double load_max);
};

struct LoadProfile {
  std::vector<double> values;  // values[t-1] = L(t)

  LoadProfile() = default;
  explicit LoadProfile(int horizon) : values(horizon, 0.0) {}
  explicit LoadProfile(std::vector<double> v) : values(std::move(v)) {}

  int horizon() const { return static_cast<int>(values.size()); }
  double& at(int t) { return values[t - 1]; }
  double at(int t) const { return values[t - 1]; }
};

struct PriceVector {
  std::vector<double> values;          // values[t-1] = lambda(t)
  std::vector<int> kink_slots;         // slots where the cost was non-differentiable

  int horizon() const { return static_cast<int>(values.size()); }
  double at(int t) const { return values[t - 1]; }
};

// Start-time weight matrix s_j(t). Rows sum to 1 and are supported on the
// job's admissible start set; entries within integrality_tolerance of {0,1}
// are treated as integral.
struct ScheduleMatrix {
  int num_jobs = 0;
  int horizon = 0;
  std::vector<double> entries;  // row-major, num_jobs x horizon
  double integrality_tolerance = 1e-9;

  double& at(int job, int t) { return entries[static_cast<size_t>(job) * horizon + t - 1]; }
  double at(int job, int t) const {
    return entries[static_cast<size_t>(job) * horizon + t - 1];
  }

  bool is_fractional(double v) const {
    return v > integrality_tolerance && v < 1.0 - integrality_tolerance;
  }
  int fractional_count() const;
  int fractional_count_row(int job) const;
  bool is_integral() const { return fractional_count() == 0; }

  // Snap entries within integrality_tolerance of {0,1} to exact 0/1.
  void snap();

  static ScheduleMatrix zeros(int num_jobs, int horizon, double tol = 1e-9);
  static ScheduleMatrix from_starts(const std::vector<int>& starts, int horizon,
                                    double tol = 1e-9);
  // Chosen start per job; requires an integral matrix.
  std::vector<int> to_starts() const;
};

struct Instance {
  int horizon = 0;
  std::vector<Job> jobs;
  CostModel cost;
  std::vector<double> renewable;  // empty or length horizon, entries >= 0

  int num_jobs() const { return static_cast<int>(jobs.size()); }
  int max_duration() const;
  double max_power_duration_product() const;  // max_j p_j * d_j (rectangular reading)
  double max_shape_l1() const;                // max_j ||p^(j)||_1
  double total_energy() const;
  double load_upper_bound() const;  // sum over jobs of max power, >= any feasible L(t)
  double target(int t) const {
    return renewable.empty() ? 0.0 : renewable[static_cast<size_t>(t) - 1];
  }

  void validate() const;  // throws InvalidArgument
};

std::string to_string(ShapeKind kind);
std::string to_string(CostKind kind);
ShapeKind shape_kind_from_string(const std::string& s);
CostKind cost_kind_from_string(const std::string& s);

}  // namespace flexsched
