#include "regnewt/spectral.hpp"

#include "regnewt/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <string>

namespace regnewt {

namespace {

Eigen::MatrixXd weighted_form(const Eigen::MatrixXd& m, const Space& domain, const Space& range) {
  Eigen::ArrayXd left = range.weights().array().sqrt();
  Eigen::ArrayXd right = domain.weights().array().rsqrt();
  return left.matrix().asDiagonal() * m * right.matrix().asDiagonal();
}

}  // namespace

Eigen::VectorXd SvdFactors::padded_singular_values() const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(right_vectors.cols());
  s.head(singular_values.size()) = singular_values;
  return s;
}

Vector SvdFactors::apply_gram_function(const std::function<double(double)>& f, const Vector& x) const {
  if (x.space() != domain) throw DimensionError("vector outside the operator domain");
  Eigen::VectorXd coeffs = right_vectors.transpose() * (domain.weights().array() * x.entries().array()).matrix();
  Eigen::VectorXd s = padded_singular_values();
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) coeffs[j] *= f(s[j] * s[j]);
  return Vector(domain, right_vectors * coeffs);
}

Eigen::MatrixXd SvdFactors::gram_function_matrix(const std::function<double(double)>& f) const {
  Eigen::VectorXd s = padded_singular_values();
  Eigen::VectorXd fv(s.size());
  for (Eigen::Index j = 0; j < s.size(); ++j) fv[j] = f(s[j] * s[j]);
  return right_vectors * fv.asDiagonal() * right_vectors.transpose() * domain.weights().asDiagonal();
}

Eigen::MatrixXd SvdFactors::reconstruct() const {
  const Eigen::Index r = rank_slots();
  Eigen::MatrixXd weighted_right = domain.weights().asDiagonal() * right_vectors.leftCols(r);
  return left_vectors * singular_values.asDiagonal() * weighted_right.transpose();
}

SvdFactors svd_dense(const LinearOperator& a) {
  if (!a.has_dense()) throw UnsupportedOperatorError("svd_dense needs a dense operator");
  if (a.dim_in() > kMaxDenseDim || a.dim_out() > kMaxDenseDim)
    throw UnsupportedOperatorError("svd_dense is limited to " + std::to_string(kMaxDenseDim) + " unknowns");

  Eigen::MatrixXd scaled = weighted_form(a.dense(), a.domain(), a.range());
  Eigen::MatrixXd u, v;
  Eigen::VectorXd s;
  if (std::max(scaled.rows(), scaled.cols()) <= 256) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeFullV);
    u = svd.matrixU();
    v = svd.matrixV();
    s = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeFullV);
    u = svd.matrixU();
    v = svd.matrixV();
    s = svd.singularValues();
  }

  Eigen::ArrayXd inv_sqrt_out = a.range().weights().array().rsqrt();
  Eigen::ArrayXd inv_sqrt_in = a.domain().weights().array().rsqrt();
  return SvdFactors{
      a.domain(),
      a.range(),
      std::move(s),
      inv_sqrt_out.matrix().asDiagonal() * u,
      inv_sqrt_in.matrix().asDiagonal() * v,
  };
}

double dense_operator_norm(const Eigen::MatrixXd& m, const Space& domain, const Space& range) {
  if (m.rows() != range.dim() || m.cols() != domain.dim()) throw DimensionError("matrix shape does not match");
  Eigen::MatrixXd scaled = weighted_form(m, domain, range);
  if (scaled.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

}  // namespace regnewt
