#include "flexsched/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "flexsched/model.hpp"

namespace flexsched {

double payment(const Job& job, const std::vector<double>& schedule_row,
               const PriceVector& prices) {
  if (schedule_row.size() != prices.values.size())
    throw DimensionMismatch("payment: row and price lengths differ");
  double total = 0.0;
  for (int t = 1; t <= static_cast<int>(schedule_row.size()); ++t) {
    double w = schedule_row[static_cast<size_t>(t - 1)];
    if (w == 0.0) continue;
    total += w * placed_price(job, prices.values, t);
  }
  return total;
}

double price_tolerance_from_gap(const Instance& instance, double gap_certificate) {
  double min_energy = HUGE_VAL;
  for (const Job& job : instance.jobs)
    if (job.total_energy() > 0) min_energy = std::min(min_energy, job.total_energy());
  if (!std::isfinite(min_energy)) min_energy = 1.0;
  return std::max(1e-8, std::abs(gap_certificate) / min_energy);
}

namespace {

std::vector<double> matrix_row(const ScheduleMatrix& s, int job) {
  std::vector<double> row(static_cast<size_t>(s.horizon));
  for (int t = 1; t <= s.horizon; ++t) row[static_cast<size_t>(t - 1)] = s.at(job, t);
  return row;
}

}  // namespace

PaymentLedger audit_payment_equivalence(const Instance& instance,
                                        const ScheduleMatrix& relaxed,
                                        const ScheduleMatrix& integral,
                                        const PriceVector& prices,
                                        double gap_certificate) {
  if (relaxed.num_jobs != instance.num_jobs() || integral.num_jobs != instance.num_jobs())
    throw DimensionMismatch("audit_payment_equivalence: schedule size mismatch");
  PaymentLedger ledger;
  ledger.price_tolerance = price_tolerance_from_gap(instance, gap_certificate);
  ledger.entries.reserve(instance.jobs.size());
  for (int j = 0; j < instance.num_jobs(); ++j) {
    const Job& job = instance.jobs[static_cast<size_t>(j)];
    PaymentEntry e;
    e.job = j;
    e.payment_relaxed = payment(job, matrix_row(relaxed, j), prices);
    e.payment_integral = payment(job, matrix_row(integral, j), prices);
    e.residual = std::abs(e.payment_relaxed - e.payment_integral);
    e.flagged = e.residual > ledger.price_tolerance * std::max(1.0, job.total_energy());
    ledger.max_payment = std::max(ledger.max_payment, std::abs(e.payment_integral));
    if (e.flagged) ++ledger.flagged_count;
    ledger.entries.push_back(e);
  }
  return ledger;
}

SelfSchedulingReport audit_self_scheduling(const Instance& instance,
                                           const ScheduleMatrix& integral,
                                           const PriceVector& prices,
                                           double gap_certificate) {
  SelfSchedulingReport report;
  report.price_tolerance = price_tolerance_from_gap(instance, gap_certificate);
  for (int j = 0; j < instance.num_jobs(); ++j) {
    const Job& job = instance.jobs[static_cast<size_t>(j)];
    SelfSchedulingEntry e;
    e.job = j;
    e.payment_assigned = payment(job, matrix_row(integral, j), prices);
    double best = HUGE_VAL;
    bool tie = false;
    const double tol = report.price_tolerance * std::max(1.0, job.total_energy());
    for (int t : admissible_starts(job, instance.horizon)) {
      double alt = placed_price(job, prices.values, t);
      best = std::min(best, alt);
      if (std::abs(alt - e.payment_assigned) <= tol) tie = true;
    }
    e.best_alternative = best;
    e.violation = e.payment_assigned - best;
    if (e.violation > tol) {
      ++report.violation_count;
      report.worst_violation = std::max(report.worst_violation, e.violation);
    } else if (tie) {
      ++report.equal_alternative_count;
    }
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace flexsched
