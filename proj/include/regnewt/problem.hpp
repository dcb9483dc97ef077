#pragma once

#include "regnewt/linear_operator.hpp"
#include "regnewt/vector.hpp"

#include <functional>
#include <optional>
#include <string>

namespace regnewt {

/// Nonlinear forward map F: X -> Y with Frechet derivative, the radius rho of
/// the ball B_rho(x_true) it is posed on, and (for experiments) the solution.
struct NonlinearProblem {
  std::string name;
  Space space_x;
  Space space_y;
  std::function<Vector(const Vector&)> forward;
  std::function<LinearOperator(const Vector&)> derivative;
  double rho = 1.0;
  std::optional<Vector> x_true;

  Eigen::Index dim_x() const { return space_x.dim(); }
  Eigen::Index dim_y() const { return space_y.dim(); }

  /// F(x_true). Throws ConfigurationError when no solution is attached.
  Vector exact_data() const;
  /// Copy with x_true attached (must live in space_x).
  NonlinearProblem with_solution(Vector x) const;
};

}  // namespace regnewt
