#pragma once

#include <vector>

#include "flexsched/types.hpp"

namespace flexsched {

// pi^MP = <lambda, P^(j) s_j>: what the job pays at marginal prices for the
// load its schedule row induces.
double payment(const Job& job, const std::vector<double>& schedule_row,
               const PriceVector& prices);

struct PaymentEntry {
  int job = 0;
  double payment_relaxed = 0.0;
  double payment_integral = 0.0;
  double residual = 0.0;  // |pi(s^R_j) - pi(s^I_j)|
  bool flagged = false;
};

struct PaymentLedger {
  std::vector<PaymentEntry> entries;
  double price_tolerance = 0.0;  // lambda-scale slack derived from the solver gap
  double max_payment = 0.0;
  int flagged_count = 0;
};

// Compares per-job payments under the relaxed and the rounded schedule. The
// tolerance is gap / min_j energy_j floored at 1e-8, scaled per job by its
// energy; support-breaking rounds surface as flagged residuals.
PaymentLedger audit_payment_equivalence(const Instance& instance,
                                        const ScheduleMatrix& relaxed,
                                        const ScheduleMatrix& integral,
                                        const PriceVector& prices,
                                        double gap_certificate);

struct SelfSchedulingEntry {
  int job = 0;
  double payment_assigned = 0.0;
  double best_alternative = 0.0;
  double violation = 0.0;  // payment_assigned - best_alternative, when positive
};

struct SelfSchedulingReport {
  std::vector<SelfSchedulingEntry> entries;
  double price_tolerance = 0.0;
  double worst_violation = 0.0;  // most positive margin beyond tolerance
  int violation_count = 0;
  int equal_alternative_count = 0;  // ties are allowed (weak inequality)
};

// Checks that no job could pay strictly less by unilaterally moving to any
// other admissible start under the given prices.
SelfSchedulingReport audit_self_scheduling(const Instance& instance,
                                           const ScheduleMatrix& integral,
                                           const PriceVector& prices,
                                           double gap_certificate);

double price_tolerance_from_gap(const Instance& instance, double gap_certificate);

}  // namespace flexsched
