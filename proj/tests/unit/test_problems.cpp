#include "oracles.hpp"

#include "regnewt/errors.hpp"
#include "regnewt/problems.hpp"
#include "regnewt/spectral.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace regnewt;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Linear problem with a fixed coordinate matrix on unit-weight spaces.
NonlinearProblem matrix_problem(const Eigen::MatrixXd& m, Eigen::VectorXd xt) {
  LinearOperator a = LinearOperator::from_matrix(Space::unit(m.cols()), Space::unit(m.rows()), m);
  NonlinearProblem p{"matrix", a.domain(), a.range(), [a](const Vector& x) { return a.apply(x); },
                     [a](const Vector&) { return a; }, 10.0, std::nullopt};
  return p.with_solution(Vector::from(std::move(xt)));
}

NonlinearProblem standard_elliptic(Eigen::Index n) {
  const Eigen::VectorXd x = elliptic_grid(n);
  Eigen::VectorXd c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * x[i]);
  return elliptic_problem(n, Eigen::VectorXd::Constant(n, 10.0), 1.0, 1.0, c, 10.0);
}

}  // namespace

TEST(Diagonal, Forward) {
  const NonlinearProblem p = diagonal_problem(vec({0.5, 0.25}), 1.0);
  const Vector y = p.forward(Vector::from(vec({1, 2})));
  EXPECT_DOUBLE_EQ(y[0], 0.5);
  EXPECT_DOUBLE_EQ(y[1], 0.5);
  EXPECT_THROW(diagonal_problem(vec({0.8, 0.1}), 1.0), ScalingError);
  EXPECT_THROW(diagonal_problem(vec({0.5, 0.0}), 1.0), DomainError);
  EXPECT_THROW(p.exact_data(), ConfigurationError);
}

TEST(Elliptic, ManufacturedSolution) {
  const Eigen::Index n = 64;
  const Eigen::VectorXd x = elliptic_grid(n);
  const Eigen::VectorXd f = (std::numbers::pi * std::numbers::pi) * (std::numbers::pi * x.array()).sin().matrix();
  const NonlinearProblem p = elliptic_problem(n, f, 0.0, 0.0, Eigen::VectorXd::Zero(n), 1.0);
  const Vector u = p.forward(*p.x_true);
  const Eigen::VectorXd exact = (std::numbers::pi * x.array()).sin().matrix();
  EXPECT_LE((u.entries() - exact).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Elliptic, DerivativeDenseMatchesMaps) {
  const NonlinearProblem p = standard_elliptic(16);
  const LinearOperator a = p.derivative(*p.x_true);
  std::mt19937_64 rng(1);
  const Eigen::VectorXd h = oracle::gaussian(rng, 16, 1).col(0);
  EXPECT_LE((a.dense() * h - a.apply_raw(h)).norm(), 1e-12 * (a.dense() * h).norm());
}

TEST(Elliptic, AdjointIdentity) {
  const NonlinearProblem p = standard_elliptic(64);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const Vector c = *p.x_true + p.x_true->with_entries(0.2 * oracle::gaussian(rng, 64, 1).col(0));
    const LinearOperator a = p.derivative(c);
    const Vector u = c.with_entries(oracle::gaussian(rng, 64, 1).col(0));
    const Vector v = c.with_entries(oracle::gaussian(rng, 64, 1).col(0));
    const double lhs = inner(a.apply(u), v), rhs = inner(u, a.apply_adjoint(v));
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

// ‖F(c + t h) - F(c) - t F'(c) h‖ / t^2 levels off as t -> 0.
TEST(Elliptic, TaylorSecondOrder) {
  const NonlinearProblem p = standard_elliptic(64);
  std::mt19937_64 rng(3);
  const Vector c = *p.x_true;
  const Vector h = c.with_entries(oracle::gaussian(rng, 64, 1).col(0));
  const Vector fc = p.forward(c), dh = p.derivative(c).apply(h);
  std::vector<double> ratios;
  for (double t : {1e-2, 1e-3, 1e-4}) ratios.push_back(norm(p.forward(c + t * h) - fc - t * dh) / (t * t));
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    EXPECT_GT(ratios[i] / ratios[i - 1], 0.8);
    EXPECT_LT(ratios[i] / ratios[i - 1], 1.25);
  }
  // Without the derivative the remainder is only first order.
  EXPECT_GT(norm(p.forward(c + 1e-4 * h) - fc) / 1e-8, 100.0 * ratios.back());
}

TEST(Elliptic, IndefiniteOperatorRejected) {
  const NonlinearProblem p = standard_elliptic(16);
  const Vector bad = p.x_true->with_entries(Eigen::VectorXd::Constant(16, -5000.0));
  EXPECT_THROW(p.forward(bad), IllPosedInstanceError);
  EXPECT_THROW(elliptic_problem(4, Eigen::VectorXd::Zero(4), 0, 0, Eigen::VectorXd::Zero(4), 1.0), DomainError);
}

TEST(InitialGuess, HolderDiagonal) {
  const NonlinearProblem p = diagonal_problem(vec({0.5, 0.25}), 1.0).with_solution(Vector::from(vec({1, 1})));
  const InitialGuess g = construct_initial_guess(p, SourceSpec::holder(1.0, Vector::from(vec({1, 1}))));
  EXPECT_NEAR(g.x0[0] - 1.0, 0.25, 1e-15);
  EXPECT_NEAR(g.x0[1] - 1.0, 0.0625, 1e-15);
  EXPECT_NEAR(g.dropped_norm, 0.0, 1e-15);
  EXPECT_EQ(g.retained_modes, 2);
}

TEST(InitialGuess, LogarithmicDiagonal) {
  const NonlinearProblem p = diagonal_problem(vec({0.5, 0.25}), 1.0).with_solution(Vector::from(vec({0, 0})));
  const InitialGuess g = construct_initial_guess(p, SourceSpec::logarithmic(1.0, Vector::from(vec({1, 0}))));
  EXPECT_NEAR(g.x0[0], 1.0 / -std::log(0.25), 1e-15);
  EXPECT_NEAR(g.x0[0], 0.7213475, 1e-7);
  EXPECT_NEAR(g.x0[1], 0.0, 1e-15);
}

TEST(InitialGuess, NuZeroProjectsAndReportsDroppedPart) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = 0.5;
  const NonlinearProblem p = matrix_problem(m, vec({0, 0}));
  const InitialGuess g = construct_initial_guess(p, SourceSpec::holder(0.0, Vector::from(vec({1, 1}))));
  EXPECT_NEAR(g.x0[0], 1.0, 1e-15);
  EXPECT_NEAR(g.x0[1], 0.0, 1e-15);
  EXPECT_NEAR(g.dropped_norm, 1.0, 1e-15);
  EXPECT_EQ(g.retained_modes, 1);
  EXPECT_THROW(SourceSpec::holder(-0.5, Vector::from(vec({1, 1}))), DomainError);
  EXPECT_THROW(SourceSpec::logarithmic(0.0, Vector::from(vec({1, 1}))), DomainError);
}

TEST(Rescale, BoundAndDegenerateCase) {
  const auto it1 = FilterFamily::iterated_tikhonov(1);
  const double bound = std::min(family_constants(it1).c3, std::sqrt(beta0(it1, 1.0)));
  EXPECT_DOUBLE_EQ(bound, 0.5);
  const NonlinearProblem scaled = diagonal_problem(vec({0.5, 0.25}), 1.0).with_solution(Vector::from(vec({1, 1})));
  RescaledProblem r = rescale_problem(scaled, it1, 1.0, {*scaled.x_true});
  EXPECT_NEAR(r.scale, 1.0, 1e-9);
  const NonlinearProblem big = diagonal_problem(vec({0.7, 0.25}), 1.0).with_solution(Vector::from(vec({1, 1})));
  r = rescale_problem(big, it1, 1.0, {*big.x_true});
  EXPECT_NEAR(r.scale, 0.5 / 0.7, 1e-9);
  EXPECT_LE(r.scale * 0.7, bound * (1 + 1e-9));
  EXPECT_NEAR(r.problem.forward(*big.x_true)[0], r.scale * 0.7, 1e-12);
  EXPECT_NEAR(svd_dense(r.problem.derivative(*big.x_true)).singular_values[0], r.scale * 0.7, 1e-12);
  const NonlinearProblem zero = matrix_problem(Eigen::MatrixXd::Zero(2, 2), vec({1, 1}));
  EXPECT_THROW(rescale_problem(zero, it1, 1.0, {*zero.x_true}), DegenerateProblemError);
}

TEST(Noise, ExactLevelAndDeterminism) {
  const Vector y = Vector::from(vec({0.3, -0.2, 0.9}));
  EXPECT_EQ(make_noisy(y, 0.0, 5).entries(), y.entries());
  for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL}) EXPECT_NEAR(norm(make_noisy(y, 1e-3, seed) - y), 1e-3, 1e-15);
  EXPECT_EQ(make_noisy(y, 1e-3, 7).entries(), make_noisy(y, 1e-3, 7).entries());
  EXPECT_NE(make_noisy(y, 1e-3, 7).entries(), make_noisy(y, 1e-3, 8).entries());
  EXPECT_THROW(make_noisy(y, -1.0, 0), DomainError);
}
