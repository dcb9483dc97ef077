#pragma once

#include <Eigen/Core>

#include <memory>

namespace regnewt {

/// A finite-dimensional Hilbert space R^n with the weighted inner product
/// (u, v) = sum_i w_i u_i v_i. The weights are the quadrature weights of the
/// discretization (mesh widths for the elliptic problem, ones otherwise).
///
/// Spaces are cheap to copy: the weight vector is shared and immutable.
class Space {
 public:
  /// Throws DimensionError on an empty weight vector, DomainError on a
  /// non-positive or non-finite weight.
  explicit Space(Eigen::VectorXd weights);

  static Space unit(Eigen::Index dim);
  static Space uniform(Eigen::Index dim, double weight);

  Eigen::Index dim() const { return weights_->size(); }
  const Eigen::VectorXd& weights() const { return *weights_; }

  /// Same dimension and identical weights.
  bool operator==(const Space& other) const;
  bool operator!=(const Space& other) const { return !(*this == other); }

 private:
  std::shared_ptr<const Eigen::VectorXd> weights_;
};

/// Element of a Space. Value type; arithmetic requires both operands to live
/// in the same space.
class Vector {
 public:
  Vector(Space space, Eigen::VectorXd entries);

  static Vector zeros(const Space& space);
  /// Unit weights.
  static Vector from(Eigen::VectorXd entries);

  const Space& space() const { return space_; }
  const Eigen::VectorXd& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.size(); }
  double operator[](Eigen::Index i) const { return entries_[i]; }

  /// Same space, new coordinates.
  Vector with_entries(Eigen::VectorXd entries) const { return Vector(space_, std::move(entries)); }

  bool all_finite() const { return entries_.allFinite(); }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

 private:
  Space space_;
  Eigen::VectorXd entries_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector v);
Vector operator*(Vector v, double s);

/// Weighted inner product. Throws DimensionError when the spaces differ.
double inner(const Vector& u, const Vector& v);
double norm(const Vector& u);

}  // namespace regnewt
