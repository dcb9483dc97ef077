#include "regnewt/filters.hpp"

#include "regnewt/errors.hpp"
#include "regnewt/spectral.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace regnewt {

namespace {

constexpr double kNormLimit = 0.70710678118654752440;  // 1/sqrt(2)
constexpr double kNormSlack = 1.05;
constexpr std::uint64_t kNormSeed = 0x5eed;

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive and finite");
}

bool counts_iterations(const FilterFamily& f) {
  return f.kind() == FilterKind::Landweber || f.kind() == FilterKind::Lardy;
}

Eigen::LLT<Eigen::MatrixXd> factor_shifted_gram(const LinearOperator& a, double shift) {
  const Eigen::MatrixXd& m = a.dense();
  Eigen::MatrixXd gram = m.transpose() * a.range().weights().asDiagonal() * m;
  gram.diagonal() += shift * a.domain().weights();
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw DomainError("shifted normal matrix is not positive definite");
  return llt;
}

// M^T W_out v, i.e. W_in A* v.
Eigen::VectorXd weighted_adjoint(const LinearOperator& a, const Eigen::VectorXd& v) {
  return a.dense().transpose() * (a.range().weights().array() * v.array()).matrix();
}

Eigen::VectorXd tikhonov_apply(int order, double alpha, const LinearOperator& a, const Eigen::VectorXd& b) {
  auto llt = factor_shifted_gram(a, alpha);
  const Eigen::VectorXd rhs0 = weighted_adjoint(a, b);
  const Eigen::VectorXd& w = a.domain().weights();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(a.dim_in());
  for (int i = 0; i < order; ++i) z = llt.solve((alpha * w.array() * z.array()).matrix() + rhs0);
  return z;
}

Eigen::VectorXd landweber_apply(long n, const LinearOperator& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.dim_in());
  for (long i = 0; i <= n; ++i) x += a.apply_adjoint_raw(b - a.apply_raw(x));
  return x;
}

Eigen::VectorXd lardy_apply(long steps, const LinearOperator& a, const Eigen::VectorXd& b) {
  auto llt = factor_shifted_gram(a, 1.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.dim_in());
  for (long i = 0; i < steps; ++i) x += llt.solve(weighted_adjoint(a, b - a.dense() * x));
  return x;
}

Eigen::VectorXd exponential_spectral(const FilterFamily& family, double alpha, const LinearOperator& a,
                                     const Eigen::VectorXd& b) {
  SvdFactors f = svd_dense(a);
  const Eigen::VectorXd wb = (a.range().weights().array() * b.array()).matrix();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(a.dim_in());
  for (Eigen::Index j = 0; j < f.rank_slots(); ++j) {
    const double s = f.singular_values[j];
    if (s == 0.0) continue;
    const double coeff = g_value(family, alpha, s * s) * s * f.left_vectors.col(j).dot(wb);
    h += coeff * f.right_vectors.col(j);
  }
  return h;
}

// w' = A*(b - A w), w(0) = 0, integrated to t = 1/alpha with classical RK4.
Eigen::VectorXd exponential_rk4(double alpha, const LinearOperator& a, const Eigen::VectorXd& b) {
  const double horizon = 1.0 / alpha;
  const long steps = std::max(1L, static_cast<long>(std::ceil(4.0 * horizon)));
  const double dt = horizon / static_cast<double>(steps);
  const Eigen::VectorXd atb = a.apply_adjoint_raw(b);
  auto rhs = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd { return atb - a.apply_adjoint_raw(a.apply_raw(w)); };
  Eigen::VectorXd w = Eigen::VectorXd::Zero(a.dim_in());
  for (long i = 0; i < steps; ++i) {
    Eigen::VectorXd k1 = rhs(w);
    Eigen::VectorXd k2 = rhs(w + 0.5 * dt * k1);
    Eigen::VectorXd k3 = rhs(w + 0.5 * dt * k2);
    Eigen::VectorXd k4 = rhs(w + dt * k3);
    w += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return w;
}

}  // namespace

FilterFamily FilterFamily::iterated_tikhonov(int order) {
  if (order < 1) throw DomainError("iterated Tikhonov order must be at least 1");
  return FilterFamily(FilterKind::IteratedTikhonov, order, false);
}
FilterFamily FilterFamily::landweber() { return FilterFamily(FilterKind::Landweber, 0, false); }
FilterFamily FilterFamily::lardy() { return FilterFamily(FilterKind::Lardy, 0, false); }
FilterFamily FilterFamily::exponential() { return FilterFamily(FilterKind::Exponential, 0, false); }
FilterFamily FilterFamily::lardy_literal() { return FilterFamily(FilterKind::Lardy, 0, true); }

std::string FilterFamily::name() const {
  switch (kind_) {
    case FilterKind::IteratedTikhonov:
      return "iterated_tikhonov(m=" + std::to_string(order_) + ")";
    case FilterKind::Landweber:
      return "landweber";
    case FilterKind::Lardy:
      return literal_ ? "lardy(literal)" : "lardy";
    case FilterKind::Exponential:
      return "exponential";
  }
  return "unknown";
}

long iteration_count(double alpha) {
  require_alpha(alpha);
  if (alpha > 1.0) throw DomainError("Landweber/Lardy need alpha <= 1 so that floor(1/alpha) >= 1");
  // Schedules produce alpha = 1/n in floating point; absorb the rounding of 1/(1/n).
  return static_cast<long>(std::floor((1.0 / alpha) * (1.0 + 1e-12)));
}

double g_value(const FilterFamily& family, double alpha, double lambda) {
  require_alpha(alpha);
  switch (family.kind()) {
    case FilterKind::IteratedTikhonov: {
      const double m = family.order();
      if (lambda == 0.0) return m / alpha;
      return -std::expm1(-m * std::log1p(lambda / alpha)) / lambda;
    }
    case FilterKind::Landweber: {
      const double steps = static_cast<double>(iteration_count(alpha) + 1);
      if (lambda == 0.0) return steps;
      return -std::expm1(steps * std::log1p(-lambda)) / lambda;
    }
    case FilterKind::Lardy: {
      const long n = iteration_count(alpha);
      const double steps = static_cast<double>(family.literal_summation() ? n : n + 1);
      const double tail = lambda == 0.0 ? steps : -std::expm1(-steps * std::log1p(lambda)) / lambda;
      return family.literal_summation() ? 1.0 + tail : tail;
    }
    case FilterKind::Exponential:
      if (lambda == 0.0) return 1.0 / alpha;
      return -std::expm1(-lambda / alpha) / lambda;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double r_value(const FilterFamily& family, double alpha, double lambda) {
  require_alpha(alpha);
  switch (family.kind()) {
    case FilterKind::IteratedTikhonov:
      return std::exp(-family.order() * std::log1p(lambda / alpha));
    case FilterKind::Landweber:
      return std::exp(static_cast<double>(iteration_count(alpha) + 1) * std::log1p(-lambda));
    case FilterKind::Lardy: {
      const long n = iteration_count(alpha);
      if (family.literal_summation()) return std::exp(-static_cast<double>(n) * std::log1p(lambda)) - lambda;
      return std::exp(-static_cast<double>(n + 1) * std::log1p(lambda));
    }
    case FilterKind::Exponential:
      return std::exp(-lambda / alpha);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double log_r_value(const FilterFamily& family, double alpha, double lambda) {
  require_alpha(alpha);
  switch (family.kind()) {
    case FilterKind::IteratedTikhonov:
      return -family.order() * std::log1p(lambda / alpha);
    case FilterKind::Landweber:
      return static_cast<double>(iteration_count(alpha) + 1) * std::log1p(-lambda);
    case FilterKind::Lardy:
      if (family.literal_summation()) {
        const double r = r_value(family, alpha, lambda);
        return r > 0.0 ? std::log(r) : std::numeric_limits<double>::quiet_NaN();
      }
      return -static_cast<double>(iteration_count(alpha) + 1) * std::log1p(lambda);
    case FilterKind::Exponential:
      return -lambda / alpha;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw DomainError("invalid log grid");
  std::vector<double> g(static_cast<std::size_t>(count));
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> standard_lambda_grid() {
  std::vector<double> g{0.0};
  const auto tail = log_grid(1e-5, 0.5, 511);
  g.insert(g.end(), tail.begin(), tail.end());
  return g;
}

std::vector<double> standard_alpha_grid() { return log_grid(1e-4, 1.0, 16); }

namespace {
void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 0.5)) throw DomainError("lambda must lie in [0, 1/2]");
}
}  // namespace

double eval_g(const FilterFamily& family, double alpha, double lambda) {
  require_lambda(lambda);
  return g_value(family, alpha, lambda);
}

double eval_r(const FilterFamily& family, double alpha, double lambda) {
  require_lambda(lambda);
  return r_value(family, alpha, lambda);
}

Vector apply_filter(const FilterFamily& family, double alpha, const LinearOperator& a, const Vector& b,
                    const FilterOptions& options) {
  require_alpha(alpha);
  if (b.space() != a.range()) throw DimensionError("right-hand side outside the operator range");
  if (counts_iterations(family)) (void)iteration_count(alpha);
  if (options.check_norm) {
    const double est = op_norm_estimate(a, 100, kNormSeed);
    if (est > kNormSlack * kNormLimit)
      throw ScalingError("operator norm estimate " + std::to_string(est) + " exceeds 1/sqrt(2)");
  }

  Eigen::VectorXd h;
  switch (family.kind()) {
    case FilterKind::IteratedTikhonov:
      h = tikhonov_apply(family.order(), alpha, a, b.entries());
      break;
    case FilterKind::Landweber:
      h = landweber_apply(iteration_count(alpha), a, b.entries());
      break;
    case FilterKind::Lardy: {
      const long n = iteration_count(alpha);
      if (family.literal_summation()) {
        h = lardy_apply(n, a, b.entries()) + a.apply_adjoint_raw(b.entries());
      } else {
        h = lardy_apply(n + 1, a, b.entries());
      }
      break;
    }
    case FilterKind::Exponential:
      if (a.has_dense() && !options.matrix_free_exponential) {
        h = exponential_spectral(family, alpha, a, b.entries());
      } else {
        h = exponential_rk4(alpha, a, b.entries());
      }
      break;
  }
  return Vector(a.domain(), std::move(h));
}

Vector apply_residual(const FilterFamily& family, double alpha, const LinearOperator& a, const Vector& x,
                      const FilterOptions& options) {
  return x - apply_filter(family, alpha, a, a.apply(x), options);
}

FilterConstants family_constants(const FilterFamily& family) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (family.kind()) {
    case FilterKind::IteratedTikhonov: {
      const double m = family.order();
      return FilterConstants{
          std::pow(m - 1.0, m - 1.0) / std::pow(m, m),
          m,
          std::sqrt(m),
          std::pow((2.0 * m - 1.0) / (2.0 * m), m) / std::sqrt(2.0 * m - 1.0),
          (1.0 - std::pow((m + 1.0) / (m + 3.0), m)) * std::sqrt(m),
          m,
      };
    }
    case FilterKind::Landweber:
    case FilterKind::Lardy:
      return FilterConstants{0.5, 2.0, 1.0, std::sqrt(2.0) / 3.0, std::sqrt(2.0), inf};
    case FilterKind::Exponential:
      return FilterConstants{std::exp(-1.0), 1.0, 1.0, 1.0 / std::sqrt(2.0 * std::numbers::e),
                             std::sqrt(2.0 / std::numbers::e), inf};
  }
  return {};
}

double qualification_bound(const FilterFamily& family, double nu) {
  if (!(nu >= 0.0)) throw DomainError("qualification exponent must be nonnegative");
  const FilterConstants c = family_constants(family);
  if (nu > c.qualification)
    throw QualificationError("nu = " + std::to_string(nu) + " exceeds the qualification of " + family.name());
  switch (family.kind()) {
    case FilterKind::IteratedTikhonov: {
      const double m = family.order();
      return std::pow(nu / m, nu) * std::pow((m - nu) / m, m - nu);
    }
    case FilterKind::Landweber:
    case FilterKind::Lardy:
      return std::pow(nu, nu);
    case FilterKind::Exponential:
      return std::pow(nu / std::numbers::e, nu);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double beta0(const FilterFamily& family, double alpha0) {
  require_alpha(alpha0);
  double b = 0.0;
  switch (family.kind()) {
    case FilterKind::IteratedTikhonov:
      b = alpha0 * (std::pow(4.0 / 3.0, 1.0 / family.order()) - 1.0);
      break;
    case FilterKind::Landweber:
      b = 1.0 - std::pow(0.75, 1.0 / static_cast<double>(iteration_count(alpha0) + 1));
      break;
    case FilterKind::Lardy:
      if (family.literal_summation()) {
        // r is decreasing in lambda; bisection on r = 3/4.
        double lo = 0.0, hi = 0.5;
        if (r_value(family, alpha0, hi) >= 0.75) return 0.5;
        while (hi - lo > 1e-12) {
          const double mid = 0.5 * (lo + hi);
          (r_value(family, alpha0, mid) >= 0.75 ? lo : hi) = mid;
        }
        b = lo;
      } else {
        b = std::pow(4.0 / 3.0, 1.0 / static_cast<double>(iteration_count(alpha0) + 1)) - 1.0;
      }
      break;
    case FilterKind::Exponential:
      b = alpha0 * std::log(4.0 / 3.0);
      break;
  }
  return std::min(b, 0.5);
}

}  // namespace regnewt
