#pragma once

#include "regnewt/vector.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

namespace regnewt {

/// Matrix-free linear map between two weighted spaces.
///
/// `apply` and `apply_adjoint` act on raw coordinates; the adjoint is taken
/// with respect to the weighted inner products of domain and range, i.e. for
/// a dense coordinate matrix M it is W_in^{-1} M^T W_out. An optional dense
/// materialization enables the factorization-based filter paths and the
/// spectral oracle.
class LinearOperator {
 public:
  using Map = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  LinearOperator(Space domain, Space range, Map apply, Map apply_adjoint,
                 std::optional<Eigen::MatrixXd> dense = std::nullopt);

  /// Dense operator; the adjoint is derived from the space weights.
  static LinearOperator from_matrix(Space domain, Space range, Eigen::MatrixXd matrix);
  /// Square diagonal operator on `space`.
  static LinearOperator diagonal(Space space, Eigen::VectorXd diag);
  static LinearOperator zero(Space domain, Space range);

  const Space& domain() const { return domain_; }
  const Space& range() const { return range_; }
  Eigen::Index dim_in() const { return domain_.dim(); }
  Eigen::Index dim_out() const { return range_.dim(); }

  Vector apply(const Vector& u) const;
  Vector apply_adjoint(const Vector& v) const;
  Eigen::VectorXd apply_raw(const Eigen::VectorXd& u) const { return apply_(u); }
  Eigen::VectorXd apply_adjoint_raw(const Eigen::VectorXd& v) const { return adjoint_(v); }

  bool has_dense() const { return dense_ != nullptr; }
  /// Throws UnsupportedOperatorError for matrix-free operators.
  const Eigen::MatrixXd& dense() const;

  /// s * A.
  LinearOperator scaled(double s) const;

 private:
  Space domain_;
  Space range_;
  Map apply_;
  Map adjoint_;
  std::shared_ptr<const Eigen::MatrixXd> dense_;
};

/// Power-iteration estimate of ‖A‖ on A*A. Returns ‖A v‖ for the final unit
/// iterate v, which never exceeds the true norm beyond rounding. The zero
/// operator yields 0.
double op_norm_estimate(const LinearOperator& a, int iters, std::uint64_t seed);

}  // namespace regnewt
