#include "regnewt/solver.hpp"

#include "regnewt/errors.hpp"

#include <cmath>

namespace regnewt {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::StoppedByDiscrepancy:
      return "stopped_by_discrepancy";
    case RunStatus::ReachedKmax:
      return "reached_kmax";
    case RunStatus::LeftDomainBall:
      return "left_domain_ball";
    case RunStatus::NumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

namespace {

Vector step_from(const NonlinearProblem& problem, const FilterFamily& family, double alpha, const Vector& x0,
                 const Vector& xk, const Vector& fxk, const Vector& ydelta, const FilterOptions& options) {
  const LinearOperator a = problem.derivative(xk);
  Vector b = ydelta - fxk + a.apply(xk - x0);
  return x0 + apply_filter(family, alpha, a, b, options);
}

struct Runner {
  const NonlinearProblem& problem;
  const FilterFamily& family;
  const AlphaSchedule& schedule;
  const Vector& x0;
  const Vector& y;
  double tau;
  double delta;
  long kmax;
  bool stop_on_discrepancy;
  bool record_errors;
  bool store_iterates;
  const std::vector<Vector>* reference;
  FilterOptions options;

  RunResult run() const {
    if (x0.space() != problem.space_x) throw DimensionError("initial guess outside the parameter space");
    if (y.space() != problem.space_y) throw DimensionError("data outside the data space");
    RunResult result{RunStatus::ReachedKmax, std::nullopt, x0, {}, {}, {}};
    Vector x = x0;
    for (long k = 0;; ++k) {
      if (store_iterates) result.iterates.push_back(x);
      const double alpha = schedule.alpha(k);
      const Vector fx = problem.forward(x);
      IterationRecord rec;
      rec.k = k;
      rec.alpha = alpha;
      rec.residual_norm = norm(fx - y);
      if (record_errors && problem.x_true) rec.error_norm = norm(x - *problem.x_true);
      if (reference && delta > 0.0 && k < static_cast<long>(reference->size()))
        rec.stability_ratio = norm(x - (*reference)[k]) * std::sqrt(alpha) / delta;
      result.records.push_back(rec);
      result.final_iterate = x;

      if (!x.all_finite() || !fx.all_finite() || !std::isfinite(rec.residual_norm)) {
        result.status = RunStatus::NumericalFailure;
        result.message = "non-finite iterate or residual at k=" + std::to_string(k);
        return result;
      }
      if (problem.x_true && norm(x - *problem.x_true) > problem.rho) {
        result.status = RunStatus::LeftDomainBall;
        result.message = "iterate left B_rho(x_true) at k=" + std::to_string(k);
        return result;
      }
      if (stop_on_discrepancy && rec.residual_norm <= tau * delta) {
        result.status = RunStatus::StoppedByDiscrepancy;
        result.k_delta = k;
        return result;
      }
      if (k >= kmax) {
        result.status = RunStatus::ReachedKmax;
        if (stop_on_discrepancy) result.message = "discrepancy not reached within kmax=" + std::to_string(kmax);
        return result;
      }
      x = step_from(problem, family, alpha, x0, x, fx, y, options);
    }
  }
};

}  // namespace

Vector newton_step(const NonlinearProblem& problem, const FilterFamily& family, double alpha, const Vector& x0,
                   const Vector& xk, const Vector& ydelta, const FilterOptions& options) {
  return step_from(problem, family, alpha, x0, xk, problem.forward(xk), ydelta, options);
}

RunResult run_discrepancy(const NonlinearProblem& problem, const FilterFamily& family, const AlphaSchedule& schedule,
                          const SolverConfig& config, const Vector& x0, const Vector& ydelta,
                          const std::vector<Vector>* reference) {
  if (!(config.tau > 1.0)) throw DomainError("tau must exceed 1");
  if (!(config.delta >= 0.0)) throw DomainError("noise level must be nonnegative");
  if (config.kmax < 1) throw DomainError("kmax must be at least 1");
  Runner r{problem, family, schedule, x0, ydelta, config.tau, config.delta, config.kmax, true,
           config.record_errors, config.store_iterates, reference, config.filter};
  return r.run();
}

RunResult run_noise_free(const NonlinearProblem& problem, const FilterFamily& family, const AlphaSchedule& schedule,
                         long kmax, const Vector& x0, const Vector& y, const FilterOptions& options) {
  if (kmax < 0) throw DomainError("kmax must be nonnegative");
  Runner r{problem, family, schedule, x0, y, 2.0, 0.0, kmax, false, true, true, nullptr, options};
  return r.run();
}

bool discrepancy_postcondition_holds(const std::vector<IterationRecord>& records, long k_delta, double tau,
                                     double delta) {
  if (k_delta < 0 || k_delta >= static_cast<long>(records.size())) return false;
  const double level = tau * delta;
  if (!(records[k_delta].residual_norm <= level)) return false;
  for (long j = 0; j < k_delta; ++j)
    if (!(records[j].residual_norm > level)) return false;
  return true;
}

}  // namespace regnewt
