#pragma once

#include "regnewt/filters.hpp"

#include <string>
#include <vector>

namespace regnewt {

/// Decreasing regularization parameters alpha_k -> 0 with bounded ratios
/// 1 <= alpha_k / alpha_{k+1} <= ratio_bound().
///
///  - Geometric(alpha0, rho): alpha_k = alpha0 / rho^k, rho > 1.
///  - ArithReciprocalInt(n0, q): alpha_k = 1 / (n0 + q k).
///  - ArithReciprocalReal(t0, theta0): alpha_k = 1 / (t0 + theta0 k).
///
/// q = 0 and theta0 = 0 give constant schedules; they do not tend to zero and
/// only serve diagnostic checks.
class AlphaSchedule {
 public:
  enum class Kind { Geometric, ArithReciprocalInt, ArithReciprocalReal };

  static AlphaSchedule geometric(double alpha0, double rho);
  static AlphaSchedule arith_reciprocal_int(long n0, long q);
  static AlphaSchedule arith_reciprocal_real(double t0, double theta0);

  Kind kind() const { return kind_; }
  double first() const { return first_; }
  double step() const { return step_; }

  /// alpha_k; throws DomainError for k < 0.
  double alpha(long k) const;
  double alpha0() const { return alpha(0); }
  /// r with alpha_k / alpha_{k+1} <= r for all k.
  double ratio_bound() const;
  std::string describe() const;

 private:
  AlphaSchedule(Kind kind, double first, double step) : kind_(kind), first_(first), step_(step) {}

  Kind kind_;
  double first_;  // alpha0, n0 or t0
  double step_;   // rho, q or theta0
};

/// Throws ScheduleCompatibilityError for pairings without a ratio bound:
/// Landweber, Lardy and the exponential filter with a geometric schedule.
void require_compatible(const FilterFamily& family, const AlphaSchedule& schedule);

/// Analytic bound c5 on r_{alpha_k}(lambda) / r_{alpha_{k+1}}(lambda):
/// r^m for iterated Tikhonov, 2^q for Landweber, (3/2)^q for Lardy and
/// e^theta0 for the exponential filter (q, theta0 the reciprocal increments,
/// rounded up for Landweber/Lardy on real-valued schedules).
double c5_hint(const FilterFamily& family, const AlphaSchedule& schedule);

/// Grid supremum over `lambda_grid` and 0 <= k < kmax of
/// r_{alpha_k}(lambda) / r_{alpha_{k+1}}(lambda). A lower bound of the true c5.
double validate_schedule(const AlphaSchedule& schedule, const FilterFamily& family, long kmax,
                         const std::vector<double>& lambda_grid = standard_lambda_grid());

}  // namespace regnewt
