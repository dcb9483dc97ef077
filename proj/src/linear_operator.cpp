#include "regnewt/linear_operator.hpp"

#include "regnewt/errors.hpp"

#include <cmath>
#include <random>
#include <string>

namespace regnewt {

LinearOperator::LinearOperator(Space domain, Space range, Map apply, Map apply_adjoint,
                               std::optional<Eigen::MatrixXd> dense)
    : domain_(std::move(domain)),
      range_(std::move(range)),
      apply_(std::move(apply)),
      adjoint_(std::move(apply_adjoint)) {
  if (dense) {
    if (dense->rows() != range_.dim() || dense->cols() != domain_.dim())
      throw DimensionError("dense form has shape " + std::to_string(dense->rows()) + "x" +
                           std::to_string(dense->cols()));
    dense_ = std::make_shared<const Eigen::MatrixXd>(std::move(*dense));
  }
}

LinearOperator LinearOperator::from_matrix(Space domain, Space range, Eigen::MatrixXd matrix) {
  if (matrix.rows() != range.dim() || matrix.cols() != domain.dim())
    throw DimensionError("matrix shape does not match the spaces");
  auto m = std::make_shared<const Eigen::MatrixXd>(std::move(matrix));
  Eigen::VectorXd w_in = domain.weights();
  Eigen::VectorXd w_out = range.weights();
  Map fwd = [m](const Eigen::VectorXd& u) -> Eigen::VectorXd { return (*m) * u; };
  Map adj = [m, w_in, w_out](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd t = m->transpose() * (w_out.array() * v.array()).matrix();
    return (t.array() / w_in.array()).matrix();
  };
  return LinearOperator(std::move(domain), std::move(range), std::move(fwd), std::move(adj), *m);
}

LinearOperator LinearOperator::diagonal(Space space, Eigen::VectorXd diag) {
  if (diag.size() != space.dim()) throw DimensionError("diagonal length does not match the space");
  Eigen::MatrixXd dense = diag.asDiagonal();
  Map fwd = [diag](const Eigen::VectorXd& u) -> Eigen::VectorXd { return (diag.array() * u.array()).matrix(); };
  // Same weights on both sides, so the diagonal is self-adjoint.
  Map adj = fwd;
  return LinearOperator(space, space, std::move(fwd), std::move(adj), std::move(dense));
}

LinearOperator LinearOperator::zero(Space domain, Space range) {
  return from_matrix(domain, range, Eigen::MatrixXd::Zero(range.dim(), domain.dim()));
}

Vector LinearOperator::apply(const Vector& u) const {
  if (u.space() != domain_) throw DimensionError("operator applied to a vector outside its domain");
  return Vector(range_, apply_(u.entries()));
}

Vector LinearOperator::apply_adjoint(const Vector& v) const {
  if (v.space() != range_) throw DimensionError("adjoint applied to a vector outside the range space");
  return Vector(domain_, adjoint_(v.entries()));
}

const Eigen::MatrixXd& LinearOperator::dense() const {
  if (!dense_) throw UnsupportedOperatorError("operator has no dense materialization");
  return *dense_;
}

LinearOperator LinearOperator::scaled(double s) const {
  Map fwd = [f = apply_, s](const Eigen::VectorXd& u) -> Eigen::VectorXd { return s * f(u); };
  Map adj = [f = adjoint_, s](const Eigen::VectorXd& v) -> Eigen::VectorXd { return s * f(v); };
  std::optional<Eigen::MatrixXd> d;
  if (dense_) d = s * (*dense_);
  return LinearOperator(domain_, range_, std::move(fwd), std::move(adj), std::move(d));
}

double op_norm_estimate(const LinearOperator& a, int iters, std::uint64_t seed) {
  if (iters < 1) throw DomainError("power iteration needs at least one iteration");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(a.dim_in());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);

  const Eigen::VectorXd& w_in = a.domain().weights();
  const Eigen::VectorXd& w_out = a.range().weights();
  auto norm_in = [&](const Eigen::VectorXd& x) { return std::sqrt((w_in.array() * x.array().square()).sum()); };
  auto norm_out = [&](const Eigen::VectorXd& x) { return std::sqrt((w_out.array() * x.array().square()).sum()); };

  double nv = norm_in(v);
  if (nv == 0.0) return 0.0;
  v /= nv;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd next = a.apply_adjoint_raw(a.apply_raw(v));
    double nn = norm_in(next);
    if (nn == 0.0) return 0.0;
    v = next / nn;
  }
  return norm_out(a.apply_raw(v));
}

}  // namespace regnewt
