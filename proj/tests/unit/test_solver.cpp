#include "oracles.hpp"

#include "regnewt/errors.hpp"
#include "regnewt/problems.hpp"
#include "regnewt/schedule.hpp"
#include "regnewt/solver.hpp"

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

NonlinearProblem two_mode(Eigen::VectorXd xt = vec({1, 1})) {
  return diagonal_problem(vec({0.5, 0.25}), 100.0).with_solution(Vector::from(std::move(xt)));
}

// Linear diagonal iteration mode by mode: x_{k+1} = x0 + g(sigma^2) sigma (y - sigma x0).
struct DiagonalOracle {
  Eigen::VectorXd sigma, x0, y;
  long k_delta(const FilterFamily& f, const AlphaSchedule& s, double tau, double delta, long kmax) const {
    Eigen::VectorXd x = x0;
    for (long k = 0; k <= kmax; ++k) {
      if ((sigma.cwiseProduct(x) - y).norm() <= tau * delta) return k;
      const double a = s.alpha(k);
      for (Eigen::Index i = 0; i < x.size(); ++i)
        x[i] = x0[i] + static_cast<double>(oracle::g(f, a, sigma[i] * sigma[i])) * sigma[i] * (y[i] - sigma[i] * x0[i]);
    }
    return -1;
  }
};

}  // namespace

TEST(Schedule, Values) {
  EXPECT_DOUBLE_EQ(AlphaSchedule::geometric(1, 2).alpha(3), 0.125);
  EXPECT_DOUBLE_EQ(AlphaSchedule::arith_reciprocal_int(1, 2).alpha(3), 1.0 / 7.0);
  EXPECT_DOUBLE_EQ(AlphaSchedule::arith_reciprocal_real(2, 0.5).alpha(4), 0.25);
  EXPECT_DOUBLE_EQ(AlphaSchedule::arith_reciprocal_int(1, 0).alpha(100), 1.0);
  EXPECT_THROW(AlphaSchedule::geometric(1, 1), DomainError);
  EXPECT_THROW(AlphaSchedule::arith_reciprocal_int(0, 1), DomainError);
  EXPECT_THROW(AlphaSchedule::arith_reciprocal_real(0, 1), DomainError);
  EXPECT_THROW(AlphaSchedule::geometric(1, 2).alpha(-1), DomainError);
}

TEST(ScheduleProperty, RatiosWithinBound) {
  for (const AlphaSchedule& s : {AlphaSchedule::geometric(1, 3), AlphaSchedule::arith_reciprocal_int(2, 3),
                                 AlphaSchedule::arith_reciprocal_real(0.5, 0.7)})
    for (long k = 0; k < 200; ++k) {
      const double q = s.alpha(k) / s.alpha(k + 1);
      ASSERT_GE(q, 1.0);
      ASSERT_LE(q, s.ratio_bound() * (1 + 1e-14)) << s.describe();
    }
}

TEST(Schedule, Compatibility) {
  EXPECT_NO_THROW(require_compatible(FilterFamily::iterated_tikhonov(1), AlphaSchedule::geometric(1, 2)));
  EXPECT_THROW(require_compatible(FilterFamily::landweber(), AlphaSchedule::geometric(1, 2)),
               ScheduleCompatibilityError);
  EXPECT_THROW(require_compatible(FilterFamily::lardy(), AlphaSchedule::geometric(1, 2)), ScheduleCompatibilityError);
  EXPECT_THROW(require_compatible(FilterFamily::exponential(), AlphaSchedule::geometric(1, 2)),
               ScheduleCompatibilityError);
  EXPECT_NO_THROW(require_compatible(FilterFamily::landweber(), AlphaSchedule::arith_reciprocal_int(1, 1)));
}

TEST(Schedule, RatioHintsAndMeasuredValues) {
  const auto lw = FilterFamily::landweber();
  EXPECT_DOUBLE_EQ(c5_hint(lw, AlphaSchedule::arith_reciprocal_int(1, 1)), 2.0);
  EXPECT_LE(validate_schedule(AlphaSchedule::arith_reciprocal_int(1, 1), lw, 50), 2.0 * (1 + 1e-9));
  EXPECT_LE(validate_schedule(AlphaSchedule::arith_reciprocal_int(1, 2), lw, 50), 4.0 * (1 + 1e-9));
  const auto ex = FilterFamily::exponential();
  EXPECT_NEAR(c5_hint(ex, AlphaSchedule::arith_reciprocal_real(1, 1)), std::numbers::e, 1e-15);
  EXPECT_LE(validate_schedule(AlphaSchedule::arith_reciprocal_real(1, 1), ex, 50), std::numbers::e * (1 + 1e-9));
  EXPECT_LE(validate_schedule(AlphaSchedule::arith_reciprocal_real(1, 0.5), ex, 50), 1.6487213);
  const auto it1 = FilterFamily::iterated_tikhonov(1);
  EXPECT_DOUBLE_EQ(c5_hint(it1, AlphaSchedule::geometric(1, 2)), 2.0);
  EXPECT_LE(validate_schedule(AlphaSchedule::geometric(1, 2), it1, 50), 2.0 * (1 + 1e-9));
  EXPECT_DOUBLE_EQ(c5_hint(FilterFamily::iterated_tikhonov(3), AlphaSchedule::geometric(1, 2)), 8.0);
  EXPECT_DOUBLE_EQ(c5_hint(FilterFamily::lardy(), AlphaSchedule::arith_reciprocal_int(1, 2)), 2.25);
  EXPECT_DOUBLE_EQ(validate_schedule(AlphaSchedule::arith_reciprocal_int(1, 0), lw, 20), 1.0);
}

TEST(NewtonStep, LinearProblemIgnoresCurrentIterate) {
  const NonlinearProblem p = two_mode();
  const Vector x0 = Vector::from(vec({0, 0})), yd = Vector::from(vec({0.3, 0.1}));
  const FilterFamily it = FilterFamily::iterated_tikhonov(1);
  const Vector a = newton_step(p, it, 0.1, x0, Vector::from(vec({5, -3})), yd);
  const Vector b = newton_step(p, it, 0.1, x0, Vector::from(vec({0, 7})), yd);
  EXPECT_LE((a - b).entries().norm(), 1e-14);
  EXPECT_NEAR(a[0], 0.5 * 0.3 / (0.1 + 0.25), 1e-14);
  EXPECT_NEAR(a[1], 0.25 * 0.1 / (0.1 + 0.0625), 1e-14);
}

TEST(NewtonStep, ExactDataConsistency) {
  const NonlinearProblem p = two_mode();
  const Vector x0 = Vector::from(vec({1, -1}));
  const Vector y = p.forward(x0);
  const Vector x = newton_step(p, FilterFamily::iterated_tikhonov(1), 1e-8, x0, x0, y);
  EXPECT_LE((x - x0).entries().norm(), 1e-6);
}

TEST(Discrepancy, ZeroErrorStartStopsImmediately) {
  const NonlinearProblem p = two_mode();
  SolverConfig c;
  c.delta = 1e-3;
  const Vector yd = make_noisy(p.exact_data(), c.delta, 4);
  const RunResult r = run_discrepancy(p, FilterFamily::landweber(), AlphaSchedule::arith_reciprocal_int(1, 1), c,
                                      *p.x_true, yd);
  EXPECT_EQ(r.status, RunStatus::StoppedByDiscrepancy);
  EXPECT_EQ(r.k_delta, 0);
}

TEST(Discrepancy, HugeNoiseStopsImmediately) {
  const NonlinearProblem p = two_mode();
  SolverConfig c;
  c.delta = 10.0;
  const RunResult r = run_discrepancy(p, FilterFamily::landweber(), AlphaSchedule::arith_reciprocal_int(1, 1), c,
                                      Vector::from(vec({0, 0})), p.exact_data());
  EXPECT_EQ(r.k_delta, 0);
}

// Two-mode example with a nu = 1 source: x0 - x_true = A*A omega, omega = (1, 1).
TEST(Discrepancy, TwoModeRegression) {
  const NonlinearProblem p = two_mode();
  const InitialGuess g = construct_initial_guess(p, SourceSpec::holder(1.0, Vector::from(vec({1, 1}))));
  SolverConfig c;
  c.tau = 1.1;
  c.delta = 1e-3;
  const Vector yd = make_noisy(p.exact_data(), c.delta, 0);
  const auto lw = FilterFamily::landweber();
  const auto sched = AlphaSchedule::arith_reciprocal_int(1, 1);
  const RunResult r = run_discrepancy(p, lw, sched, c, g.x0, yd);
  ASSERT_EQ(r.status, RunStatus::StoppedByDiscrepancy);
  ASSERT_TRUE(r.k_delta);
  EXPECT_TRUE(discrepancy_postcondition_holds(r.records, *r.k_delta, 1.1, 1e-3));
  EXPECT_LE(r.records.back().residual_norm, 1.1e-3);
  ASSERT_GT(*r.k_delta, 0);
  EXPECT_GT(r.records[*r.k_delta - 1].residual_norm, 1.1e-3);

  const DiagonalOracle o{vec({0.5, 0.25}), g.x0.entries(), yd.entries()};
  EXPECT_EQ(*r.k_delta, o.k_delta(lw, sched, 1.1, 1e-3, 10000));
  EXPECT_EQ(*r.k_delta, 40);  // regression value
}

TEST(DiscrepancyProperty, MatchesModewiseOracle) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.01, 0.7);
  for (const auto& f : oracle::families()) {
    for (int t = 0; t < 4; ++t) {
      Eigen::VectorXd s(5), xt(5);
      for (Eigen::Index i = 0; i < 5; ++i) {
        s[i] = u(rng);
        xt[i] = u(rng) - 0.3;
      }
      const NonlinearProblem p = diagonal_problem(s, 1e6).with_solution(Vector::from(xt));
      const Vector x0 = Vector::from(Eigen::VectorXd::Zero(5));
      SolverConfig c;
      c.delta = 1e-3;
      c.kmax = 400;
      const Vector yd = make_noisy(p.exact_data(), c.delta, static_cast<std::uint64_t>(t));
      const auto sched = AlphaSchedule::arith_reciprocal_real(1, 0.5);
      const RunResult r = run_discrepancy(p, f, sched, c, x0, yd);
      const long expect = DiagonalOracle{s, x0.entries(), yd.entries()}.k_delta(f, sched, c.tau, c.delta, c.kmax);
      if (expect < 0) {
        EXPECT_EQ(r.status, RunStatus::ReachedKmax) << f.name();
      } else {
        ASSERT_TRUE(r.k_delta) << f.name();
        EXPECT_EQ(*r.k_delta, expect) << f.name();
        EXPECT_TRUE(discrepancy_postcondition_holds(r.records, *r.k_delta, c.tau, c.delta));
      }
    }
  }
}

TEST(Discrepancy, StatusReporting) {
  const NonlinearProblem p = two_mode();
  SolverConfig c;
  c.delta = 1e-12;
  c.kmax = 3;
  const Vector x0 = Vector::from(vec({0, 0}));
  RunResult r = run_discrepancy(p, FilterFamily::landweber(), AlphaSchedule::arith_reciprocal_int(1, 1), c, x0,
                                p.exact_data());
  EXPECT_EQ(r.status, RunStatus::ReachedKmax);
  EXPECT_FALSE(r.k_delta);
  EXPECT_EQ(r.records.size(), 4u);

  NonlinearProblem small = diagonal_problem(vec({0.5, 0.25}), 0.1).with_solution(Vector::from(vec({1, 1})));
  r = run_discrepancy(small, FilterFamily::landweber(), AlphaSchedule::arith_reciprocal_int(1, 1), c, x0,
                      small.exact_data());
  EXPECT_EQ(r.status, RunStatus::LeftDomainBall);

  NonlinearProblem nan = two_mode();
  nan.forward = [](const Vector& x) { return x.with_entries(Eigen::VectorXd::Constant(2, NAN)); };
  r = run_discrepancy(nan, FilterFamily::landweber(), AlphaSchedule::arith_reciprocal_int(1, 1), c,
                      *nan.x_true, nan.exact_data());
  EXPECT_EQ(r.status, RunStatus::NumericalFailure);

  c.tau = 1.0;
  EXPECT_THROW(run_discrepancy(p, FilterFamily::landweber(), AlphaSchedule::arith_reciprocal_int(1, 1), c, x0,
                               p.exact_data()),
               DomainError);
}

TEST(Discrepancy, ZeroNoiseRunsToKmax) {
  const NonlinearProblem p = two_mode();
  SolverConfig c;
  c.kmax = 5;
  const RunResult r = run_discrepancy(p, FilterFamily::iterated_tikhonov(1), AlphaSchedule::geometric(1, 2), c,
                                      Vector::from(vec({0, 0})), p.exact_data());
  EXPECT_EQ(r.status, RunStatus::ReachedKmax);
  EXPECT_EQ(r.records.back().k, 5);
}

TEST(NoiseFree, FixedPointAndNoSteps) {
  const NonlinearProblem p = two_mode();
  const auto lw = FilterFamily::landweber();
  const auto s = AlphaSchedule::arith_reciprocal_int(1, 1);
  RunResult r = run_noise_free(p, lw, s, 10, *p.x_true, p.exact_data());
  for (const Vector& x : r.iterates) EXPECT_LE((x - *p.x_true).entries().norm(), 1e-15);
  const Vector x0 = Vector::from(vec({0.2, 0.4}));
  r = run_noise_free(p, lw, s, 0, x0, p.exact_data());
  ASSERT_EQ(r.iterates.size(), 1u);
  EXPECT_EQ(r.final_iterate.entries(), x0.entries());
}

// Linear F, exact data: e_k = r_{alpha_{k-1}}(A*A) e_0.
TEST(NoiseFree, TikhonovErrorsFollowResidualFunction) {
  const NonlinearProblem p = two_mode(vec({1, -2}));
  const auto it = FilterFamily::iterated_tikhonov(1);
  const auto s = AlphaSchedule::geometric(1, 2);
  const Vector x0 = Vector::from(vec({0.3, 0.7}));
  const RunResult r = run_noise_free(p, it, s, 12, x0, p.exact_data());
  const Eigen::VectorXd e0 = (x0 - *p.x_true).entries();
  for (long k = 1; k <= 12; ++k) {
    const Eigen::VectorXd ek = (r.iterates[k] - *p.x_true).entries();
    EXPECT_NEAR(ek[0], static_cast<double>(oracle::r(it, s.alpha(k - 1), 0.25)) * e0[0], 1e-14);
    EXPECT_NEAR(ek[1], static_cast<double>(oracle::r(it, s.alpha(k - 1), 0.0625)) * e0[1], 1e-14);
  }
}

TEST(Stability, ReferenceRatiosRecorded) {
  const NonlinearProblem p = two_mode();
  const auto lw = FilterFamily::landweber();
  const auto s = AlphaSchedule::arith_reciprocal_int(1, 1);
  const Vector x0 = Vector::from(vec({0, 0}));
  const RunResult ref = run_noise_free(p, lw, s, 50, x0, p.exact_data());
  SolverConfig c;
  c.delta = 1e-2;
  const Vector yd = make_noisy(p.exact_data(), c.delta, 1);
  const RunResult r = run_discrepancy(p, lw, s, c, x0, yd, &ref.iterates);
  ASSERT_TRUE(r.k_delta);
  EXPECT_EQ(r.records[0].stability_ratio, 0.0);
  for (const IterationRecord& rec : r.records) {
    ASSERT_TRUE(rec.stability_ratio);
    EXPECT_LE(*rec.stability_ratio, 10.0);
  }
}
