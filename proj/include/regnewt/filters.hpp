#pragma once

#include "regnewt/linear_operator.hpp"
#include "regnewt/vector.hpp"

#include <string>
#include <vector>

namespace regnewt {

enum class FilterKind { IteratedTikhonov, Landweber, Lardy, Exponential };

/// A family {g_alpha} of spectral filter functions together with its
/// residual function r_alpha(lambda) = 1 - lambda g_alpha(lambda).
///
///  - IteratedTikhonov(m): r = (alpha / (alpha + lambda))^m; m = 1 is the
///    iteratively regularized Gauss-Newton filter.
///  - Landweber: g = sum_{i=0}^{n} (1 - lambda)^i, n = floor(1/alpha).
///  - Lardy: g = sum_{i=1}^{n+1} (1 + lambda)^{-i}, i.e. n + 1 steps of the
///    implicit (I + A*A)^{-1} iteration, r = (1 + lambda)^{-(n+1)}.
///  - Exponential: g = (1 - exp(-lambda/alpha)) / lambda (asymptotic
///    regularization / showalter flow up to time 1/alpha).
///
/// Landweber and Lardy count iterations with floor(1/alpha) and therefore
/// require alpha <= 1.
class FilterFamily {
 public:
  static FilterFamily iterated_tikhonov(int order);
  static FilterFamily landweber();
  static FilterFamily lardy();
  static FilterFamily exponential();
  /// Lardy summed from i = 0: r = (1 + lambda)^{-n} - lambda, which turns
  /// negative for large n. Only useful as a negative control in verification.
  static FilterFamily lardy_literal();

  FilterKind kind() const { return kind_; }
  int order() const { return order_; }
  bool literal_summation() const { return literal_; }
  std::string name() const;

  bool operator==(const FilterFamily&) const = default;

 private:
  FilterFamily(FilterKind kind, int order, bool literal) : kind_(kind), order_(order), literal_(literal) {}

  FilterKind kind_;
  int order_;
  bool literal_;
};

/// Structural constants of a family: c0, c1 bound r*lambda and g; c2 is the
/// ratio constant between residual functions; c3, c4 bound r*sqrt(lambda) and
/// g*sqrt(lambda). `qualification` is +infinity for the iterative families.
struct FilterConstants {
  double c0;
  double c1;
  double c2;
  double c3;
  double c4;
  double qualification;
};

/// floor(1/alpha) for Landweber and Lardy. Throws DomainError unless 0 < alpha <= 1.
long iteration_count(double alpha);

/// g_alpha(lambda). Throws DomainError for alpha <= 0 or lambda outside [0, 1/2].
/// The removable singularity at lambda = 0 is evaluated by its limit.
double eval_g(const FilterFamily& family, double alpha, double lambda);
/// r_alpha(lambda), closed form. Same preconditions as eval_g.
double eval_r(const FilterFamily& family, double alpha, double lambda);

/// Unchecked versions for any lambda >= 0 (used on spectra of operators with
/// norm slightly above 1/sqrt(2) and by the oracles).
double g_value(const FilterFamily& family, double alpha, double lambda);
double r_value(const FilterFamily& family, double alpha, double lambda);
/// ln r_alpha(lambda) without underflow; NaN where r <= 0 (literal Lardy only).
double log_r_value(const FilterFamily& family, double alpha, double lambda);

/// {0} together with 511 log-spaced points in [1e-5, 1/2].
std::vector<double> standard_lambda_grid();
/// 16 log-spaced points in [1e-4, 1].
std::vector<double> standard_alpha_grid();
/// `count` log-spaced points in [lo, hi], both endpoints included.
std::vector<double> log_grid(double lo, double hi, int count);

struct FilterOptions {
  /// Integrate the exponential flow with classical RK4 even if a dense form exists.
  bool matrix_free_exponential = false;
  /// Validate ‖A‖ <= 1/sqrt(2) (with 5% slack) by power iteration.
  bool check_norm = true;
};

/// h = g_alpha(A*A) A* b, evaluated by the family's own recursion:
/// iterated Tikhonov by m Cholesky solves, Landweber and Lardy by floor(1/alpha)+1
/// sweeps, the exponential filter by the dense SVD (or RK4 with step <= 1/4).
///
/// Throws ScalingError when ‖A‖ is too large and UnsupportedOperatorError when
/// a factorization is needed but the operator is matrix-free.
Vector apply_filter(const FilterFamily& family, double alpha, const LinearOperator& a, const Vector& b,
                    const FilterOptions& options = {});

/// r_alpha(A*A) x = x - g_alpha(A*A) A*A x.
Vector apply_residual(const FilterFamily& family, double alpha, const LinearOperator& a, const Vector& x,
                      const FilterOptions& options = {});

FilterConstants family_constants(const FilterFamily& family);

/// d_nu with r_alpha(lambda) lambda^nu <= d_nu alpha^nu.
/// Throws QualificationError when nu exceeds a finite qualification.
double qualification_bound(const FilterFamily& family, double nu);

/// Largest beta0 <= 1/2 with r_{alpha0}(lambda) >= 3/4 on [0, beta0].
double beta0(const FilterFamily& family, double alpha0);

}  // namespace regnewt
