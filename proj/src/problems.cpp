#include "regnewt/problems.hpp"

#include "regnewt/errors.hpp"
#include "regnewt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>

namespace regnewt {

Vector NonlinearProblem::exact_data() const {
  if (!x_true) throw ConfigurationError("problem '" + name + "' has no solution attached");
  return forward(*x_true);
}

NonlinearProblem NonlinearProblem::with_solution(Vector x) const {
  if (x.space() != space_x) throw DimensionError("solution outside the parameter space");
  NonlinearProblem p = *this;
  p.x_true = std::move(x);
  return p;
}

NonlinearProblem diagonal_problem(const Eigen::VectorXd& sigma, double rho) {
  if (sigma.size() == 0) throw DimensionError("diagonal problem needs at least one singular value");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > 0.0)) throw DomainError("singular values must be positive");
    if (sigma[i] > 1.0 / std::sqrt(2.0) * (1.0 + 1e-12))
      throw ScalingError("sigma_" + std::to_string(i) + " = " + std::to_string(sigma[i]) + " exceeds 1/sqrt(2)");
  }
  Space space = Space::unit(sigma.size());
  LinearOperator op = LinearOperator::diagonal(space, sigma);
  NonlinearProblem p{
      "diagonal",
      space,
      space,
      [op](const Vector& x) { return op.apply(x); },
      [op](const Vector&) { return op; },
      rho,
      std::nullopt,
  };
  return p;
}

namespace {

// Symmetric tridiagonal system with constant off-diagonal `off`.
// Forward elimination fails unless every pivot is positive.
Eigen::VectorXd solve_tridiagonal(const Eigen::VectorXd& diag, double off, const Eigen::VectorXd& rhs) {
  const Eigen::Index n = diag.size();
  Eigen::VectorXd pivot(n), z(n);
  pivot[0] = diag[0];
  z[0] = rhs[0];
  if (!(pivot[0] > 0.0)) throw IllPosedInstanceError("elliptic operator is not positive definite");
  for (Eigen::Index i = 1; i < n; ++i) {
    const double l = off / pivot[i - 1];
    pivot[i] = diag[i] - l * off;
    if (!(pivot[i] > 0.0)) throw IllPosedInstanceError("elliptic operator is not positive definite");
    z[i] = rhs[i] - l * z[i - 1];
  }
  Eigen::VectorXd u(n);
  u[n - 1] = z[n - 1] / pivot[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) u[i] = (z[i] - off * u[i + 1]) / pivot[i];
  return u;
}

struct EllipticModel {
  Eigen::Index n;
  double h;
  Eigen::VectorXd rhs;  // f with boundary values folded in

  Eigen::VectorXd diagonal(const Eigen::VectorXd& c) const { return (2.0 / (h * h)) + c.array(); }
  double off() const { return -1.0 / (h * h); }
  Eigen::VectorXd solve(const Eigen::VectorXd& c, const Eigen::VectorXd& b) const {
    return solve_tridiagonal(diagonal(c), off(), b);
  }
};

}  // namespace

Eigen::VectorXd elliptic_grid(Eigen::Index n) {
  const double h = 1.0 / static_cast<double>(n + 1);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1) * h;
  return x;
}

NonlinearProblem elliptic_problem(Eigen::Index n, const Eigen::VectorXd& f, double g0, double g1,
                                  const Eigen::VectorXd& c_true, double rho) {
  if (n < 8) throw DomainError("elliptic problem needs n >= 8");
  if (f.size() != n || c_true.size() != n) throw DimensionError("f and c_true must have n entries");
  if ((c_true.array() < 0.0).any()) throw DomainError("c_true must be nonnegative");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");

  auto model = std::make_shared<EllipticModel>();
  model->n = n;
  model->h = 1.0 / static_cast<double>(n + 1);
  model->rhs = f;
  model->rhs[0] += g0 / (model->h * model->h);
  model->rhs[n - 1] += g1 / (model->h * model->h);

  Space space = Space::uniform(n, model->h);
  NonlinearProblem p{
      "elliptic",
      space,
      space,
      [model, space](const Vector& c) {
        if (c.space() != space) throw DimensionError("parameter outside the grid space");
        return Vector(space, model->solve(c.entries(), model->rhs));
      },
      [model, space](const Vector& c) {
        if (c.space() != space) throw DimensionError("parameter outside the grid space");
        const Eigen::VectorXd cc = c.entries();
        const Eigen::VectorXd u = model->solve(cc, model->rhs);
        LinearOperator::Map fwd = [model, cc, u](const Eigen::VectorXd& dh) -> Eigen::VectorXd {
          return -model->solve(cc, (dh.array() * u.array()).matrix());
        };
        LinearOperator::Map adj = [model, cc, u](const Eigen::VectorXd& w) -> Eigen::VectorXd {
          return -(u.array() * model->solve(cc, w).array()).matrix();
        };
        // Columns of -A^{-1} diag(u).
        Eigen::MatrixXd dense(model->n, model->n);
        Eigen::VectorXd e = Eigen::VectorXd::Zero(model->n);
        for (Eigen::Index j = 0; j < model->n; ++j) {
          e[j] = 1.0;
          dense.col(j) = -u[j] * model->solve(cc, e);
          e[j] = 0.0;
        }
        return LinearOperator(space, space, std::move(fwd), std::move(adj), std::move(dense));
      },
      rho,
      std::nullopt,
  };
  return p.with_solution(Vector(space, c_true));
}

SourceSpec SourceSpec::holder(double nu, Vector omega) {
  if (!(nu >= 0.0)) throw DomainError("Holder exponent must be nonnegative");
  return SourceSpec{Kind::Holder, nu, std::move(omega)};
}

SourceSpec SourceSpec::logarithmic(double mu, Vector omega) {
  if (!(mu > 0.0)) throw DomainError("logarithmic exponent must be positive");
  return SourceSpec{Kind::Logarithmic, mu, std::move(omega)};
}

InitialGuess construct_initial_guess(const NonlinearProblem& problem, const SourceSpec& spec, double tol) {
  if (!problem.x_true) throw ConfigurationError("initial guess construction needs the solution");
  if (spec.omega.space() != problem.space_x) throw DimensionError("omega outside the parameter space");
  const Vector& xt = *problem.x_true;
  const SvdFactors f = svd_dense(problem.derivative(xt));
  const double smax = f.rank_slots() > 0 ? f.singular_values[0] : 0.0;

  const Eigen::VectorXd w_omega = (problem.space_x.weights().array() * spec.omega.entries().array()).matrix();
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(problem.dim_x());
  Eigen::VectorXd kept = Eigen::VectorXd::Zero(problem.dim_x());
  Eigen::Index retained = 0;
  for (Eigen::Index j = 0; j < f.rank_slots(); ++j) {
    const double s = f.singular_values[j];
    if (!(s > tol * smax) || s == 0.0) continue;
    const double lambda = s * s;
    double phi = 0.0;
    if (spec.kind == SourceSpec::Kind::Holder) {
      phi = std::pow(lambda, spec.exponent);
    } else {
      if (lambda >= 1.0) throw DomainError("logarithmic source needs the spectrum of A*A inside (0, 1)");
      phi = std::pow(-std::log(lambda), -spec.exponent);
    }
    const double coeff = f.right_vectors.col(j).dot(w_omega);
    shift += phi * coeff * f.right_vectors.col(j);
    kept += coeff * f.right_vectors.col(j);
    ++retained;
  }
  const double dropped = norm(spec.omega - Vector(problem.space_x, kept));
  return InitialGuess{xt + Vector(problem.space_x, shift), dropped, retained};
}

RescaledProblem rescale_problem(const NonlinearProblem& problem, const FilterFamily& family, double alpha0,
                                const std::vector<Vector>& sample_points) {
  if (sample_points.empty()) throw InsufficientDataError("rescaling needs at least one sample point");
  double m = 0.0;
  for (const Vector& x : sample_points) m = std::max(m, op_norm_estimate(problem.derivative(x), 200, 0x5ca1e));
  if (!(m > 0.0)) throw DegenerateProblemError("derivative vanishes at every sample point");
  const FilterConstants c = family_constants(family);
  const double bound = std::min(c.c3 * std::sqrt(alpha0), std::sqrt(beta0(family, alpha0)));
  const double s = std::min(1.0, bound / m);

  NonlinearProblem scaled = problem;
  scaled.forward = [fwd = problem.forward, s](const Vector& x) { return s * fwd(x); };
  scaled.derivative = [der = problem.derivative, s](const Vector& x) { return der(x).scaled(s); };
  return RescaledProblem{std::move(scaled), s};
}

Vector make_noisy(const Vector& y, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw DomainError("noise level must be nonnegative");
  if (y.size() == 0) throw DimensionError("empty data vector");
  if (delta == 0.0) return y;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd xi(y.size());
  for (Eigen::Index i = 0; i < xi.size(); ++i) xi[i] = dist(rng);
  Vector noise = y.with_entries(std::move(xi));
  const double nn = norm(noise);
  if (!(nn > 0.0)) throw DegenerateProblemError("noise draw vanished");
  return y + (delta / nn) * noise;
}

}  // namespace regnewt
