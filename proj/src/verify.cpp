#include "regnewt/verify.hpp"

#include "regnewt/errors.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace regnewt {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* pattern, double a, double b, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// Tracks a supremum together with a description of where it was attained.
struct Sup {
  double value = 0.0;
  std::string where = "none";
  void offer(double v, const std::string& w) {
    if (std::isnan(v)) v = kInf;
    if (v > value || (where == "none" && v == value)) {
      value = v;
      where = w;
    }
  }
};

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()[0];
}

// Functions of A^T A for a matrix in orthonormal coordinates.
struct Gram {
  Eigen::MatrixXd v;       // n x n, orthogonal
  Eigen::VectorXd lambda;  // n eigenvalues of A^T A (zeros padded)

  explicit Gram(const Eigen::MatrixXd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    v = svd.matrixV();
    lambda = Eigen::VectorXd::Zero(a.cols());
    const auto& s = svd.singularValues();
    for (Eigen::Index j = 0; j < s.size(); ++j) lambda[j] = s[j] * s[j];
  }

  template <class F>
  Eigen::MatrixXd apply(F f) const {
    Eigen::VectorXd d(lambda.size());
    for (Eigen::Index j = 0; j < d.size(); ++j) d[j] = f(lambda[j]);
    return v * d.asDiagonal() * v.transpose();
  }
};

// A in coordinates where both inner products are Euclidean.
Eigen::MatrixXd whitened(const LinearOperator& a) {
  const Eigen::ArrayXd left = a.range().weights().array().sqrt();
  const Eigen::ArrayXd right = a.domain().weights().array().rsqrt();
  return left.matrix().asDiagonal() * a.dense() * right.matrix().asDiagonal();
}

Eigen::VectorXd whiten_vector(const Space& space, const Eigen::VectorXd& x) {
  return (space.weights().array().sqrt() * x.array()).matrix();
}

Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n01;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n01(rng);
  return m;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

Eigen::MatrixXd scaled_to_norm(Eigen::MatrixXd m, double target) {
  const double n = spectral_norm(m);
  if (n > 0.0) m *= target / n;
  return m;
}

Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(rng, n, n));
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

// r_alpha / r_beta, stable against underflow of both.
double residual_ratio(const FilterFamily& f, double alpha, double beta, double lambda) {
  const double la = log_r_value(f, alpha, lambda), lb = log_r_value(f, beta, lambda);
  if (std::isfinite(la) && std::isfinite(lb)) return std::exp(la - lb);
  const double ra = r_value(f, alpha, lambda), rb = r_value(f, beta, lambda);
  if (rb > 0.0) return ra / rb;
  return ra > rb ? kInf : 0.0;
}

}  // namespace

CheckReport make_report(std::string name, double measured, std::optional<double> bound, std::string worst_case,
                        bool heuristic) {
  CheckReport r;
  r.name = std::move(name);
  r.measured = measured;
  r.bound = bound;
  r.passed = !bound || measured <= *bound * (1.0 + 1e-9);
  r.worst_case = std::move(worst_case);
  r.heuristic = heuristic;
  return r;
}

std::vector<CheckReport> check_residual_bounds(const FilterFamily& family, const std::vector<double>& lambda_grid,
                                              const std::vector<double>& alpha_grid) {
  const FilterConstants c = family_constants(family);
  long violations = 0;
  std::string witness = "none";
  Sup r_max, lr, ga, mono, ratio_c;

  for (double alpha : alpha_grid) {
    for (double lambda : lambda_grid) {
      const double r = r_value(family, alpha, lambda);
      const double g = g_value(family, alpha, lambda);
      const std::string at = fmt("alpha=%.6g lambda=%.6g", alpha, lambda);
      // Underflow to 0 is not a sign violation; the log form decides.
      const bool positive = r > 0.0 || std::isfinite(log_r_value(family, alpha, lambda));
      if (!positive || !(g >= 0.0)) {
        if (violations == 0) witness = fmt("alpha=%.6g lambda=%.6g r=%.6g", alpha, lambda, r);
        ++violations;
      }
      r_max.offer(r, at);
      lr.offer(lambda * r / alpha, at);
      ga.offer(g * alpha, at);
    }
  }

  for (double alpha : alpha_grid) {
    for (double beta : alpha_grid) {
      if (!(alpha <= beta) || alpha == beta) continue;
      for (double lambda : lambda_grid) {
        const std::string at = fmt("alpha=%.6g beta=%.6g lambda=%.6g", alpha, beta, lambda);
        mono.offer(residual_ratio(family, alpha, beta, lambda), at);
        if (lambda == 0.0) continue;
        const double scale = std::sqrt(lambda / alpha);
        const double la = log_r_value(family, alpha, lambda), lb = log_r_value(family, beta, lambda);
        double v;
        if (std::isfinite(la) && std::isfinite(lb)) {
          v = -std::expm1(la - lb) / scale;
        } else {
          const double ra = r_value(family, alpha, lambda), rb = r_value(family, beta, lambda);
          v = rb > 0.0 ? (rb - ra) / (scale * rb) : (rb - ra <= c.c2 * scale * rb ? 0.0 : kInf);
        }
        ratio_c.offer(v, at);
      }
    }
  }

  std::vector<CheckReport> out;
  out.push_back(make_report("positivity: r > 0, g >= 0 (violations)", static_cast<double>(violations), 0.0,
                            witness));
  out.push_back(make_report("r <= 1", r_max.value, 1.0, r_max.where));
  out.push_back(make_report("lambda r / alpha <= c0", lr.value, c.c0, lr.where));
  out.push_back(make_report("alpha g <= c1", ga.value, c.c1, ga.where));
  out.push_back(make_report("monotone: r_alpha / r_beta <= 1 for alpha < beta", mono.value, 1.0, mono.where));
  out.push_back(make_report("(r_beta - r_alpha) / (sqrt(lambda/alpha) r_beta) <= c2", ratio_c.value, c.c2,
                            ratio_c.where));
  return out;
}

std::vector<CheckReport> check_sqrt_bounds(const FilterFamily& family, const std::vector<double>& lambda_grid,
                                              const std::vector<double>& alpha_grid, double c3, double c4) {
  Sup rs, gs;
  for (double alpha : alpha_grid) {
    for (double lambda : lambda_grid) {
      const std::string at = fmt("alpha=%.6g lambda=%.6g", alpha, lambda);
      const double s = std::sqrt(lambda);
      rs.offer(r_value(family, alpha, lambda) * s / std::sqrt(alpha), at);
      gs.offer(g_value(family, alpha, lambda) * s * std::sqrt(alpha), at);
    }
  }
  return {make_report("r sqrt(lambda) / sqrt(alpha) <= c3", rs.value, c3, rs.where),
          make_report("g sqrt(lambda) sqrt(alpha) <= c4", gs.value, c4, gs.where)};
}

std::vector<CheckReport> check_sqrt_bounds(const FilterFamily& family, const std::vector<double>& lambda_grid,
                                              const std::vector<double>& alpha_grid) {
  const FilterConstants c = family_constants(family);
  return check_sqrt_bounds(family, lambda_grid, alpha_grid, c.c3, c.c4);
}

CheckReport check_schedule_ratio(const FilterFamily& family, const AlphaSchedule& schedule, long kmax,
                                 const std::vector<double>& lambda_grid) {
  const double bound = c5_hint(family, schedule);
  const double measured = validate_schedule(schedule, family, kmax, lambda_grid);
  return make_report("schedule ratio r_{alpha_k} / r_{alpha_{k+1}} <= c5", measured, bound,
                     schedule.describe() + ", kmax=" + std::to_string(kmax));
}

std::vector<CheckReport> check_qualification(const FilterFamily& family, const std::vector<double>& nus,
                                             const std::vector<double>& lambda_grid,
                                             const std::vector<double>& alpha_grid) {
  std::vector<CheckReport> out;
  for (double nu : nus) {
    const double d = qualification_bound(family, nu);
    Sup s;
    for (double alpha : alpha_grid) {
      for (double lambda : lambda_grid) {
        double v;
        if (lambda == 0.0) {
          v = nu == 0.0 ? r_value(family, alpha, 0.0) : 0.0;
        } else {
          const double lr = log_r_value(family, alpha, lambda);
          v = std::isfinite(lr) ? std::exp(lr + nu * std::log(lambda / alpha))
                                : r_value(family, alpha, lambda) * std::pow(lambda / alpha, nu);
        }
        s.offer(v, fmt("alpha=%.6g lambda=%.6g", alpha, lambda));
      }
    }
    out.push_back(make_report(fmt("qualification nu=%g: r lambda^nu / alpha^nu <= d_nu", nu, 0.0), s.value, d,
                              s.where));
  }
  return out;
}

std::vector<CheckReport> check_log_qualification(const FilterFamily& family, const std::vector<double>& mus,
                                                 const std::vector<double>& alpha_grid, double alpha0,
                                                 const std::vector<double>& lambda_grid) {
  if (!(alpha0 > 0.0)) throw DomainError("alpha0 must be positive");
  for (double a : alpha_grid)
    if (!(a > 0.0 && a <= alpha0)) throw DomainError("alpha grid must lie in (0, alpha0]");
  std::vector<CheckReport> out;
  for (double mu : mus) {
    if (!(mu > 0.0)) throw DomainError("mu must be positive");
    Sup s;
    for (double alpha : alpha_grid) {
      const double denom_log = std::log(2.0 * alpha0 / alpha);
      for (double lambda : lambda_grid) {
        if (lambda <= 0.0 || lambda >= 1.0) continue;
        const double v = r_value(family, alpha, lambda) * std::pow(denom_log / -std::log(lambda), mu);
        s.offer(v, fmt("alpha=%.6g lambda=%.6g", alpha, lambda));
      }
    }
    out.push_back(make_report(fmt("log qualification mu=%g: b_mu (finite)", mu, 0.0), s.value, kFiniteBound,
                              s.where));
  }
  return out;
}

CheckReport check_interpolation_inequality(const FilterFamily& family, int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("at least one trial is required");
  const double c2 = family_constants(family).c2;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 8);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  Sup worst;

  for (int t = 0; t < trials; ++t) {
    const int m = dim(rng), n = dim(rng);
    Eigen::MatrixXd a = scaled_to_norm(gaussian_matrix(rng, m, n), unit(rng) * kInvSqrt2);
    if (t % 7 == 3 && n > 1) a.col(0).setZero();
    double alpha = log_uniform(rng, 1e-4, 1.0), beta = log_uniform(rng, 1e-4, 1.0);
    if (alpha > beta) std::swap(alpha, beta);
    if (t % 50 == 0) alpha = beta;

    Eigen::VectorXd x = gaussian_matrix(rng, n, 1).col(0);
    if (t % 97 == 5) x.setZero();
    const Gram gram(a);
    const Eigen::MatrixXd ra = gram.apply([&](double l) { return r_value(family, alpha, l); });
    const Eigen::MatrixXd rb = gram.apply([&](double l) { return r_value(family, beta, l); });
    Eigen::VectorXd xbar = rb * x;
    if (t % 4 != 0) xbar += log_uniform(rng, 1e-4, 10.0) * gaussian_matrix(rng, n, 1).col(0);

    const double lhs = ((rb - ra) * x).norm();
    const double rhs = (xbar - rb * x).norm() + c2 / std::sqrt(alpha) * (a * xbar).norm();
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInf : 0.0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "trial=%d dims=%dx%d alpha=%.6g beta=%.6g", t, m, n, alpha, beta);
    worst.offer(ratio, buf);
  }
  return make_report("interpolation inequality: LHS / RHS <= 1", worst.value, 1.0, worst.where);
}

std::vector<CheckReport> check_commutators(const FilterFamily& family, int trials,
                                           const std::vector<double>& alpha_grid, std::uint64_t seed,
                                           const CommutatorOptions& options) {
  if (trials < 1) throw DomainError("at least one trial is required");
  if (alpha_grid.empty()) throw DomainError("alpha grid is empty");
  const Eigen::Index n = options.dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_s(std::log(1e-3), std::log(kInvSqrt2));

  constexpr int kIneq = 4;
  const char* names[kIneq] = {"‖R_A - R_B‖ sqrt(alpha) / ‖A - B‖", "‖(R_A - R_B) B*‖ / ‖A - B‖",
                              "‖A (R_A - R_B) B*‖ / (sqrt(alpha) ‖A - B‖)",
                              "‖(G_A - G_B) B*‖ alpha / ‖A - B‖"};
  std::vector<std::vector<Sup>> per_alpha(kIneq, std::vector<Sup>(alpha_grid.size()));
  int used = 0;

  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXd a;
    if (t % 2 == 0) {
      Eigen::VectorXd s(n);
      for (Eigen::Index i = 0; i < n; ++i) s[i] = std::exp(log_s(rng));
      if (n > 1) s[0] = kInvSqrt2;
      a = random_orthogonal(rng, n) * s.asDiagonal() * random_orthogonal(rng, n).transpose();
    } else {
      a = scaled_to_norm(gaussian_matrix(rng, n, n), n > 1 ? kInvSqrt2 : std::exp(log_s(rng)));
    }
    const double eps = log_uniform(rng, 1e-6, 1e-1);
    Eigen::MatrixXd b = a + eps * scaled_to_norm(gaussian_matrix(rng, n, n), 1.0);
    const double nb = spectral_norm(b);
    if (nb > kInvSqrt2) b *= kInvSqrt2 / nb;
    const double dist = spectral_norm(a - b);
    if (!(dist > 0.0)) continue;
    ++used;

    const Gram ga(a), gb(b);
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
      const double alpha = alpha_grid[i];
      auto r = [&](double l) { return r_value(family, alpha, l); };
      auto g = [&](double l) { return g_value(family, alpha, l); };
      const Eigen::MatrixXd dr = ga.apply(r) - gb.apply(r);
      const Eigen::MatrixXd dg = ga.apply(g) - gb.apply(g);
      const double sa = std::sqrt(alpha);
      const double v[kIneq] = {
          spectral_norm(dr) * sa / dist,
          spectral_norm(dr * b.transpose()) / dist,
          spectral_norm(a * dr * b.transpose()) / (sa * dist),
          spectral_norm(dg * b.transpose()) * alpha / dist,
      };
      char buf[160];
      std::snprintf(buf, sizeof buf, "trial=%d alpha=%.6g ‖A-B‖=%.3g", t, alpha, dist);
      for (int k = 0; k < kIneq; ++k) per_alpha[k][i].offer(v[k], buf);
    }
  }

  std::vector<CheckReport> out;
  for (int k = 0; k < kIneq; ++k) {
    Sup overall;
    double lo = kInf, hi = 0.0;
    for (const Sup& s : per_alpha[k]) {
      overall.offer(s.value, s.where);
      lo = std::min(lo, s.value);
      hi = std::max(hi, s.value);
    }
    const double variation = used == 0 ? 1.0 : (lo > 0.0 ? hi / lo : kInf);
    out.push_back(make_report(std::string(names[k]) + ": c6 candidate", overall.value, kFiniteBound, overall.where));
    char buf[96];
    std::snprintf(buf, sizeof buf, "per-alpha sup in [%.6g, %.6g]", lo, hi);
    out.push_back(make_report(std::string(names[k]) + ": variation over alpha", variation, options.variation_limit,
                              buf));
  }
  return out;
}

std::vector<std::pair<Vector, Vector>> sample_ball_pairs(const NonlinearProblem& problem, int count, double radius,
                                                         std::uint64_t seed) {
  if (!problem.x_true) throw ConfigurationError("sampling needs the solution");
  if (count < 1) throw DomainError("at least one pair is required");
  if (!(radius > 0.0)) throw DomainError("sampling radius must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const Vector& xt = *problem.x_true;
  const double dim = static_cast<double>(problem.dim_x());
  auto draw = [&]() {
    Vector d = xt.with_entries(gaussian_matrix(rng, problem.dim_x(), 1).col(0));
    const double len = radius * std::pow(u01(rng), 1.0 / dim);
    return xt + (len / norm(d)) * d;
  };
  std::vector<std::pair<Vector, Vector>> pairs;
  pairs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vector x = draw();
    Vector z = draw();
    pairs.emplace_back(std::move(x), std::move(z));
  }
  return pairs;
}

namespace {

struct PairData {
  Eigen::MatrixXd ax, az;  // whitened derivatives
  Eigen::VectorXd d;       // whitened x - z
};

std::vector<PairData> pair_data(const NonlinearProblem& problem,
                                const std::vector<std::pair<Vector, Vector>>& pairs) {
  std::vector<PairData> out;
  for (const auto& [x, z] : pairs) {
    const Eigen::VectorXd d = whiten_vector(problem.space_x, (x - z).entries());
    if (!(d.norm() > 0.0)) continue;
    out.push_back(PairData{whitened(problem.derivative(x)), whitened(problem.derivative(z)), d});
  }
  return out;
}

// Minimizes K1 + K2 subject to K1 a_i + K2 b_i >= c_i, K1, K2 >= 0.
std::pair<double, double> fit_k1_k2(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<double>& c) {
  double t_lo = 0.0, t_hi = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] > 0.0)) continue;
    if (a[i] > 0.0) t_hi = std::max(t_hi, c[i] / a[i]);
    if (!(b[i] > 0.0)) {
      if (!(a[i] > 0.0)) return {kInf, kInf};
      t_lo = std::max(t_lo, c[i] / a[i]);
    }
  }
  t_hi = std::max(t_hi, t_lo);
  auto k2_of = [&](double t) {
    double k2 = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (b[i] > 0.0) k2 = std::max(k2, (c[i] - a[i] * t) / b[i]);
    return k2;
  };
  // t + K2(t) is convex and piecewise linear.
  double lo = t_lo, hi = t_hi;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (m1 + k2_of(m1) <= m2 + k2_of(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double t = 0.5 * (lo + hi);
  // Nudge onto the feasible side of the rounding.
  return {t * (1.0 + 1e-12), k2_of(t) * (1.0 + 1e-12)};
}

}  // namespace

NonlinearityEstimate estimate_constants(const NonlinearProblem& problem,
                                        const std::vector<std::pair<Vector, Vector>>& pairs, std::uint64_t seed) {
  const std::vector<PairData> data = pair_data(problem, pairs);
  if (data.empty()) throw InsufficientDataError("no pair of distinct points to estimate constants from");
  std::mt19937_64 rng(seed);
  NonlinearityEstimate est;
  est.pairs_used = static_cast<int>(data.size());
  std::vector<double> a, b, c;

  for (const PairData& p : data) {
    const double dn = p.d.norm();
    const Eigen::MatrixXd diff = p.ax - p.az;
    est.lipschitz = std::max(est.lipschitz, spectral_norm(diff) / dn);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p.az, Eigen::ComputeThinU | Eigen::ComputeFullV);
    if (!(diff.array() == 0.0).all()) {
      const auto& s = svd.singularValues();
      const double cut = 1e-10 * (s.size() > 0 ? s[0] : 0.0);
      Eigen::Index rank = 0;
      while (rank < s.size() && s[rank] > cut) ++rank;
      if (rank < p.az.cols()) ++est.rank_deficient_pairs;
      const Eigen::MatrixXd pinv = svd.matrixV().leftCols(rank) * s.head(rank).cwiseInverse().asDiagonal() *
                                   svd.matrixU().leftCols(rank).transpose();
      const Eigen::MatrixXd r = pinv * p.ax;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(r.rows(), r.cols());
      est.k0 = std::max(est.k0, spectral_norm(id - r) / dn);
    }

    std::vector<Eigen::VectorXd> ws;
    for (int i = 0; i < 3; ++i) ws.push_back(gaussian_matrix(rng, p.az.cols(), 1).col(0));
    ws.push_back(svd.matrixV().col(0));
    ws.push_back(svd.matrixV().col(p.az.cols() - 1));
    const double fzd = (p.az * p.d).norm();
    for (const Eigen::VectorXd& w : ws) {
      a.push_back(dn * (p.az * w).norm());
      b.push_back(fzd * w.norm());
      c.push_back((diff * w).norm());
    }
  }
  std::tie(est.k1, est.k2) = fit_k1_k2(a, b, c);
  return est;
}

std::vector<CheckReport> estimate_nonlinearity(const NonlinearProblem& problem, int samples, std::uint64_t seed,
                                               std::optional<double> radius) {
  if (samples < 2) throw DomainError("at least two samples are required");
  const double rad = radius.value_or(problem.rho);
  const auto pairs = sample_ball_pairs(problem, samples, rad, seed);
  const NonlinearityEstimate est = estimate_constants(problem, pairs, seed ^ 0x9e3779b97f4a7c15ULL);

  Sup taylor;
  for (const auto& [x, z] : sample_ball_pairs(problem, samples, rad, seed + 1)) {
    const Vector h = x - z;
    const double hn = norm(h);
    if (!(hn > 0.0)) continue;
    const Vector fz = problem.forward(z);
    const Vector rem = problem.forward(x) - fz - problem.derivative(z).apply(h);
    const double scale = std::max(1.0, norm(problem.forward(x) - fz));
    double v;
    if (norm(rem) <= 1e-13 * scale) {
      v = 0.0;
    } else {
      v = est.lipschitz > 0.0 ? norm(rem) / (0.5 * est.lipschitz * hn * hn) : kInf;
    }
    taylor.offer(v, fmt("‖x - z‖=%.6g", hn, 0.0));
  }

  const std::string info = std::to_string(est.pairs_used) + " pairs, radius " + fmt("%.6g", rad, 0.0);
  std::string k0_info = info;
  if (est.rank_deficient_pairs > 0)
    k0_info += ", " + std::to_string(est.rank_deficient_pairs) + " rank-deficient restrictions";
  return {
      make_report("L (sampled Lipschitz constant of F')", est.lipschitz, kFiniteBound, info, true),
      make_report("K0 (sampled ‖I - R(x,z)‖ / ‖x - z‖)", est.k0, kFiniteBound, k0_info, true),
      make_report("K1 (minimal K1 + K2 fit)", est.k1, kFiniteBound, info, true),
      make_report("K2 (minimal K1 + K2 fit)", est.k2, kFiniteBound, info, true),
      make_report("Taylor remainder / ((L/2) ‖x - z‖^2) <= 1 on fresh pairs", taylor.value, 1.0, taylor.where, true),
  };
}

std::vector<CheckReport> check_structured_commutators(const NonlinearProblem& problem, const FilterFamily& family,
                                                        const std::vector<std::pair<Vector, Vector>>& pairs,
                                                        const std::vector<double>& alpha_grid) {
  const NonlinearityEstimate est = estimate_constants(problem, pairs, 0xc0ffee);
  const std::vector<PairData> data = pair_data(problem, pairs);
  Sup c7, c8;
  int idx = 0;
  for (const PairData& p : data) {
    const Gram gx(p.ax), gz(p.az);
    const double dn = p.d.norm();
    const double fxd = (p.ax * p.d).norm(), fzd = (p.az * p.d).norm();
    for (double alpha : alpha_grid) {
      auto r = [&](double l) { return r_value(family, alpha, l); };
      const Eigen::MatrixXd dr = gx.apply(r) - gz.apply(r);
      const double lhs7 = spectral_norm(dr);
      const double lhs8 = spectral_norm(p.ax * dr);
      const double rhs7 = est.k0 * dn;
      const double rhs8 = (est.k0 + est.k1) * std::sqrt(alpha) * dn + est.k2 * (fxd + fzd);
      const std::string at = fmt("pair=%.0f alpha=%.6g ‖x-z‖=%.3g", idx, alpha, dn);
      const double tiny = 1e-13;
      c7.offer(lhs7 <= tiny ? 0.0 : (rhs7 > 0.0 ? lhs7 / rhs7 : kInf), at);
      c8.offer(lhs8 <= tiny ? 0.0 : (rhs8 > 0.0 ? lhs8 / rhs8 : kInf), at);
    }
    ++idx;
  }
  return {
      make_report("c7 candidate: ‖R_x - R_z‖ / (K0 ‖x - z‖)", c7.value, kFiniteBound, c7.where, true),
      make_report("c8 candidate: ‖F'(x)(R_x - R_z)‖ / RHS", c8.value, kFiniteBound, c8.where, true),
  };
}

}  // namespace regnewt
