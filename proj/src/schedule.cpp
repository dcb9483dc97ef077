#include "regnewt/schedule.hpp"

#include "regnewt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace regnewt {

AlphaSchedule AlphaSchedule::geometric(double alpha0, double rho) {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw DomainError("alpha0 must be positive");
  if (!(rho > 1.0) || !std::isfinite(rho)) throw DomainError("geometric ratio must exceed 1");
  return AlphaSchedule(Kind::Geometric, alpha0, rho);
}

AlphaSchedule AlphaSchedule::arith_reciprocal_int(long n0, long q) {
  if (n0 < 1) throw DomainError("n0 must be a positive integer");
  if (q < 0) throw DomainError("increment q must be nonnegative");
  return AlphaSchedule(Kind::ArithReciprocalInt, static_cast<double>(n0), static_cast<double>(q));
}

AlphaSchedule AlphaSchedule::arith_reciprocal_real(double t0, double theta0) {
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw DomainError("t0 must be positive");
  if (!(theta0 >= 0.0) || !std::isfinite(theta0)) throw DomainError("theta0 must be nonnegative");
  return AlphaSchedule(Kind::ArithReciprocalReal, t0, theta0);
}

double AlphaSchedule::alpha(long k) const {
  if (k < 0) throw DomainError("schedule index must be nonnegative");
  const double kk = static_cast<double>(k);
  switch (kind_) {
    case Kind::Geometric:
      return first_ * std::pow(step_, -kk);
    case Kind::ArithReciprocalInt:
    case Kind::ArithReciprocalReal:
      return 1.0 / (first_ + step_ * kk);
  }
  return 0.0;
}

double AlphaSchedule::ratio_bound() const {
  switch (kind_) {
    case Kind::Geometric:
      return step_;
    case Kind::ArithReciprocalInt:
    case Kind::ArithReciprocalReal:
      return (first_ + step_) / first_;
  }
  return 0.0;
}

std::string AlphaSchedule::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Geometric:
      os << "geometric(alpha0=" << first_ << ", rho=" << step_ << ")";
      break;
    case Kind::ArithReciprocalInt:
      os << "arith_reciprocal_int(n0=" << first_ << ", q=" << step_ << ")";
      break;
    case Kind::ArithReciprocalReal:
      os << "arith_reciprocal_real(t0=" << first_ << ", theta0=" << step_ << ")";
      break;
  }
  return os.str();
}

void require_compatible(const FilterFamily& family, const AlphaSchedule& schedule) {
  if (family.kind() == FilterKind::IteratedTikhonov) return;
  if (schedule.kind() == AlphaSchedule::Kind::Geometric)
    throw ScheduleCompatibilityError(family.name() + " needs a schedule with bounded reciprocal increments, got " +
                                     schedule.describe());
}

double c5_hint(const FilterFamily& family, const AlphaSchedule& schedule) {
  require_compatible(family, schedule);
  const double inc = schedule.step();
  switch (family.kind()) {
    case FilterKind::IteratedTikhonov:
      return std::pow(schedule.ratio_bound(), family.order());
    case FilterKind::Landweber:
      return std::pow(2.0, std::ceil(inc));
    case FilterKind::Lardy:
      return std::pow(1.5, std::ceil(inc));
    case FilterKind::Exponential:
      return std::exp(inc);
  }
  return 0.0;
}

double validate_schedule(const AlphaSchedule& schedule, const FilterFamily& family, long kmax,
                         const std::vector<double>& lambda_grid) {
  if (kmax < 1) throw DomainError("kmax must be at least 1");
  require_compatible(family, schedule);
  double sup = 0.0;
  for (long k = 0; k < kmax; ++k) {
    const double a = schedule.alpha(k), b = schedule.alpha(k + 1);
    for (double lambda : lambda_grid) {
      const double ratio = std::exp(log_r_value(family, a, lambda) - log_r_value(family, b, lambda));
      sup = std::max(sup, ratio);
    }
  }
  return sup;
}

}  // namespace regnewt
