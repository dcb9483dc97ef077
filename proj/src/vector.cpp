#include "regnewt/vector.hpp"

#include "regnewt/errors.hpp"

#include <cmath>
#include <string>

namespace regnewt {

Space::Space(Eigen::VectorXd weights) {
  if (weights.size() < 1) throw DimensionError("space dimension must be at least 1");
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] <= 0.0)
      throw DomainError("inner-product weight " + std::to_string(i) + " is not positive");
  }
  weights_ = std::make_shared<const Eigen::VectorXd>(std::move(weights));
}

Space Space::unit(Eigen::Index dim) { return uniform(dim, 1.0); }

Space Space::uniform(Eigen::Index dim, double weight) {
  if (dim < 1) throw DimensionError("space dimension must be at least 1");
  return Space(Eigen::VectorXd::Constant(dim, weight));
}

bool Space::operator==(const Space& other) const {
  if (weights_ == other.weights_) return true;
  return weights_->size() == other.weights_->size() && *weights_ == *other.weights_;
}

Vector::Vector(Space space, Eigen::VectorXd entries) : space_(std::move(space)), entries_(std::move(entries)) {
  if (entries_.size() != space_.dim())
    throw DimensionError("vector of length " + std::to_string(entries_.size()) + " in space of dimension " +
                         std::to_string(space_.dim()));
}

Vector Vector::zeros(const Space& space) { return Vector(space, Eigen::VectorXd::Zero(space.dim())); }

Vector Vector::from(Eigen::VectorXd entries) {
  Space s = Space::unit(entries.size());
  return Vector(std::move(s), std::move(entries));
}

namespace {
void require_same_space(const Vector& a, const Vector& b) {
  if (a.space() != b.space()) throw DimensionError("vectors live in different spaces");
}
}  // namespace

Vector& Vector::operator+=(const Vector& other) {
  require_same_space(*this, other);
  entries_ += other.entries_;
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_space(*this, other);
  entries_ -= other.entries_;
  return *this;
}

Vector& Vector::operator*=(double s) {
  entries_ *= s;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector v) { return v *= s; }
Vector operator*(Vector v, double s) { return v *= s; }

double inner(const Vector& u, const Vector& v) {
  require_same_space(u, v);
  return (u.space().weights().array() * u.entries().array() * v.entries().array()).sum();
}

double norm(const Vector& u) { return std::sqrt(std::max(0.0, inner(u, u))); }

}  // namespace regnewt
