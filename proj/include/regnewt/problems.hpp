#pragma once

#include "regnewt/filters.hpp"
#include "regnewt/problem.hpp"
#include "regnewt/vector.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace regnewt {

/// Linear problem F(x) = diag(sigma) x on R^n with unit weights.
/// Throws ScalingError when some sigma_i exceeds 1/sqrt(2).
NonlinearProblem diagonal_problem(const Eigen::VectorXd& sigma, double rho);

/// Interior grid points i h, i = 1..n, h = 1/(n+1).
Eigen::VectorXd elliptic_grid(Eigen::Index n);

/// Identification of c in -u'' + c u = f on (0,1), u(0) = g0, u(1) = g1, from u.
/// Centered differences on n interior points; F(c) = u(c), the derivative is
/// F'(c)h = -A(c)^{-1}(h u(c)) with adjoint w -> -u(c) A(c)^{-1} w. Both spaces
/// carry the mesh width as weight.
///
/// The forward map throws IllPosedInstanceError when A(c) is not positive definite.
NonlinearProblem elliptic_problem(Eigen::Index n, const Eigen::VectorXd& f, double g0, double g1,
                                  const Eigen::VectorXd& c_true, double rho);

struct SourceSpec {
  enum class Kind { Holder, Logarithmic };
  Kind kind;
  double exponent;  // nu or mu
  Vector omega;

  static SourceSpec holder(double nu, Vector omega);
  static SourceSpec logarithmic(double mu, Vector omega);
};

struct InitialGuess {
  Vector x0;
  /// Norm of the part of omega orthogonal to the retained right singular vectors.
  double dropped_norm;
  /// Number of singular directions used.
  Eigen::Index retained_modes;
};

/// x0 = x_true + phi(A*A) omega with A = F'(x_true) and phi(lambda) = lambda^nu
/// or (-ln lambda)^{-mu}. Modes with sigma <= tol * sigma_max are dropped.
InitialGuess construct_initial_guess(const NonlinearProblem& problem, const SourceSpec& spec, double tol = 1e-12);

struct RescaledProblem {
  NonlinearProblem problem;
  double scale;
};

/// Multiplies F by s <= 1 so that s max_x ‖F'(x)‖ <= min{c3 sqrt(alpha0), sqrt(beta0)}
/// over `sample_points`. Noise levels must be multiplied by the same factor.
/// Throws DegenerateProblemError when every sampled derivative vanishes.
RescaledProblem rescale_problem(const NonlinearProblem& problem, const FilterFamily& family, double alpha0,
                                const std::vector<Vector>& sample_points);

/// y + delta xi / ‖xi‖ with xi uniform on [-1, 1]^n from a seeded generator,
/// so that ‖y^delta - y‖ = delta.
Vector make_noisy(const Vector& y, double delta, std::uint64_t seed);

}  // namespace regnewt
