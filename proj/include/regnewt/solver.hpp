#pragma once

#include "regnewt/filters.hpp"
#include "regnewt/problem.hpp"
#include "regnewt/schedule.hpp"
#include "regnewt/vector.hpp"

#include <optional>
#include <string>
#include <vector>

namespace regnewt {

struct SolverConfig {
  double tau = 1.5;
  double delta = 0.0;
  long kmax = 10000;
  /// Record ‖x_k - x_true‖ when the problem carries a solution.
  bool record_errors = true;
  /// Keep every iterate in RunResult::iterates.
  bool store_iterates = false;
  FilterOptions filter;
};

enum class RunStatus { StoppedByDiscrepancy, ReachedKmax, LeftDomainBall, NumericalFailure };

std::string to_string(RunStatus status);

struct IterationRecord {
  long k = 0;
  double alpha = 0.0;
  double residual_norm = 0.0;
  std::optional<double> error_norm;
  std::optional<double> stability_ratio;

  bool operator==(const IterationRecord&) const = default;
};

struct RunResult {
  RunStatus status = RunStatus::ReachedKmax;
  std::optional<long> k_delta;
  Vector final_iterate;
  std::vector<IterationRecord> records;
  std::vector<Vector> iterates;  // filled when requested
  std::string message;
};

/// x0 + g_alpha(A*A) A* (ydelta - F(x_k) + A (x_k - x0)) with A = F'(x_k).
Vector newton_step(const NonlinearProblem& problem, const FilterFamily& family, double alpha, const Vector& x0,
                   const Vector& xk, const Vector& ydelta, const FilterOptions& options = {});

/// Iterates newton_step and stops at the first k with ‖F(x_k) - ydelta‖ <= tau delta,
/// checked before each step (so k_delta = 0 is possible). delta = 0 runs to kmax
/// unless the residual vanishes exactly.
///
/// When `reference` holds the noise-free iterates x_0, x_1, ..., each record
/// also carries ‖x_k^delta - x_k‖ sqrt(alpha_k) / delta.
RunResult run_discrepancy(const NonlinearProblem& problem, const FilterFamily& family, const AlphaSchedule& schedule,
                          const SolverConfig& config, const Vector& x0, const Vector& ydelta,
                          const std::vector<Vector>* reference = nullptr);

/// Exactly kmax steps on exact data y; the iterates are always stored.
RunResult run_noise_free(const NonlinearProblem& problem, const FilterFamily& family, const AlphaSchedule& schedule,
                         long kmax, const Vector& x0, const Vector& y, const FilterOptions& options = {});

/// residual(k_delta) <= tau delta < residual(j) for j < k_delta.
bool discrepancy_postcondition_holds(const std::vector<IterationRecord>& records, long k_delta, double tau,
                                     double delta);

}  // namespace regnewt
