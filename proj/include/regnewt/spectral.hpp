#pragma once

#include "regnewt/linear_operator.hpp"
#include "regnewt/vector.hpp"

#include <Eigen/Core>

#include <functional>

namespace regnewt {

/// Singular value decomposition of an operator between weighted spaces:
/// A v_j = sigma_j u_j with {u_j} orthonormal in the range weights and {v_j}
/// orthonormal in the domain weights.
///
/// `right_vectors` is a complete basis of the domain (dim_in columns); the
/// columns past `rank_slots()` span the null space and carry sigma = 0.
struct SvdFactors {
  Space domain;
  Space range;
  Eigen::VectorXd singular_values;  // nonincreasing, length min(dim_in, dim_out)
  Eigen::MatrixXd left_vectors;     // dim_out x min(dim_in, dim_out)
  Eigen::MatrixXd right_vectors;    // dim_in x dim_in

  Eigen::Index rank_slots() const { return singular_values.size(); }

  /// sigma_j for every column of `right_vectors` (zero past rank_slots()).
  Eigen::VectorXd padded_singular_values() const;

  /// f(A*A) x, with f evaluated at sigma_j^2 (and at 0 on the null space).
  Vector apply_gram_function(const std::function<double(double)>& f, const Vector& x) const;
  /// Coordinate matrix of f(A*A) as a map domain -> domain.
  Eigen::MatrixXd gram_function_matrix(const std::function<double(double)>& f) const;
  /// Coordinate matrix reconstructed from the factors.
  Eigen::MatrixXd reconstruct() const;
};

inline constexpr Eigen::Index kMaxDenseDim = 2048;

/// Dense SVD in the weighted inner products (weights absorbed symmetrically).
/// Throws UnsupportedOperatorError without a dense form or above kMaxDenseDim.
SvdFactors svd_dense(const LinearOperator& a);

/// ‖M‖ for a coordinate matrix M: domain -> range in the weighted norms.
double dense_operator_norm(const Eigen::MatrixXd& m, const Space& domain, const Space& range);

}  // namespace regnewt
