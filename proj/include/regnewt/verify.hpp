#pragma once

#include "regnewt/filters.hpp"
#include "regnewt/problem.hpp"
#include "regnewt/schedule.hpp"
#include "regnewt/vector.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace regnewt {

/// Outcome of one numerical inequality check. `measured` is a grid or sample
/// supremum, hence a lower bound of the analytic quantity.
struct CheckReport {
  std::string name;
  double measured = 0.0;
  std::optional<double> bound;
  bool passed = true;
  std::string worst_case;
  bool heuristic = false;
};

/// passed = !bound || measured <= bound * (1 + 1e-9).
CheckReport make_report(std::string name, double measured, std::optional<double> bound, std::string worst_case,
                        bool heuristic = false);

/// Bound used for reports whose only requirement is a finite measured value.
inline constexpr double kFiniteBound = 1.7976931348623157e308;

/// Residual-function assumptions on a grid:
///  (a) r > 0 and g >= 0 (violation count), r <= 1, lambda r <= c0 alpha, alpha g <= c1;
///  (b) r_alpha <= r_beta for alpha <= beta;
///  (c) r_beta - r_alpha <= c2 sqrt(lambda/alpha) r_beta for alpha <= beta.
std::vector<CheckReport> check_residual_bounds(const FilterFamily& family, const std::vector<double>& lambda_grid,
                                              const std::vector<double>& alpha_grid);

/// r sqrt(lambda) <= c3 sqrt(alpha) and g sqrt(lambda) <= c4 / sqrt(alpha), with
/// the supplied constants.
std::vector<CheckReport> check_sqrt_bounds(const FilterFamily& family, const std::vector<double>& lambda_grid,
                                              const std::vector<double>& alpha_grid, double c3, double c4);
/// Same with c3, c4 from family_constants.
std::vector<CheckReport> check_sqrt_bounds(const FilterFamily& family, const std::vector<double>& lambda_grid,
                                              const std::vector<double>& alpha_grid);

/// sup r_{alpha_k} / r_{alpha_{k+1}} against c5_hint.
CheckReport check_schedule_ratio(const FilterFamily& family, const AlphaSchedule& schedule, long kmax,
                                 const std::vector<double>& lambda_grid = standard_lambda_grid());

/// sup r_alpha(lambda) lambda^nu / alpha^nu against d_nu, one report per nu.
std::vector<CheckReport> check_qualification(const FilterFamily& family, const std::vector<double>& nus,
                                             const std::vector<double>& lambda_grid,
                                             const std::vector<double>& alpha_grid);

/// b_mu = sup r_alpha(lambda) (-ln lambda)^{-mu} / (-ln(alpha / (2 alpha0)))^{-mu};
/// lambda = 0 is skipped. Passes when finite.
std::vector<CheckReport> check_log_qualification(const FilterFamily& family, const std::vector<double>& mus,
                                                 const std::vector<double>& alpha_grid, double alpha0,
                                                 const std::vector<double>& lambda_grid = standard_lambda_grid());

/// Random trials of ‖(r_beta - r_alpha)(A*A) x‖ <= ‖xbar - r_beta(A*A) x‖ + c2 alpha^{-1/2} ‖A xbar‖.
CheckReport check_interpolation_inequality(const FilterFamily& family, int trials, std::uint64_t seed);

struct CommutatorOptions {
  Eigen::Index dim = 8;
  /// Allowed ratio between the largest and smallest per-alpha supremum.
  double variation_limit = 4.0;
};

/// The four commutator ratios with r_alpha and g_alpha over random pairs A, B
/// with ‖A‖, ‖B‖ <= 1/sqrt(2); A has norm exactly 1/sqrt(2), where the
/// suprema for large alpha are attained. Per inequality: the sampled c6 candidate
/// (must be finite) and its variation across `alpha_grid`.
std::vector<CheckReport> check_commutators(const FilterFamily& family, int trials,
                                           const std::vector<double>& alpha_grid, std::uint64_t seed,
                                           const CommutatorOptions& options = {});

/// Pairs of points drawn uniformly in direction and radius from B_radius(x_true).
std::vector<std::pair<Vector, Vector>> sample_ball_pairs(const NonlinearProblem& problem, int count, double radius,
                                                         std::uint64_t seed);

struct NonlinearityEstimate {
  double lipschitz = 0.0;  // L
  double k0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  int pairs_used = 0;
  int rank_deficient_pairs = 0;
};

/// Sampled L, K0, (K1, K2) over the given pairs; identical points are skipped.
/// Throws InsufficientDataError when no usable pair remains.
NonlinearityEstimate estimate_constants(const NonlinearProblem& problem,
                                        const std::vector<std::pair<Vector, Vector>>& pairs, std::uint64_t seed);

/// Reports for L, K0, K1, K2 (heuristic) over `samples` random pairs in
/// B_radius(x_true) (radius defaults to problem.rho), plus a Taylor consistency
/// check on fresh pairs: ‖F(x) - F(z) - F'(z)(x - z)‖ <= (L/2) ‖x - z‖^2.
std::vector<CheckReport> estimate_nonlinearity(const NonlinearProblem& problem, int samples, std::uint64_t seed,
                                               std::optional<double> radius = std::nullopt);

/// Candidates for c7 and c8 in the strengthened commutator estimates, with
/// K0, K1, K2 estimated on the same pairs.
std::vector<CheckReport> check_structured_commutators(const NonlinearProblem& problem, const FilterFamily& family,
                                                        const std::vector<std::pair<Vector, Vector>>& pairs,
                                                        const std::vector<double>& alpha_grid);

}  // namespace regnewt
