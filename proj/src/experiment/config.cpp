#include "regnewt/experiment/config.hpp"

#include "regnewt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

namespace regnewt::experiment {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigurationError(where + ": " + what);
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
}

void allow_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
      fail(where, "unknown key '" + key + "'");
  }
}

double number(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + "." + key, "must be finite");
  return d;
}

long integer(const json& j, const char* key, long fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<long>();
}

bool boolean(const json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(where + "." + key, "expected true or false");
  return v.get<bool>();
}

std::string text(const json& j, const char* key, const std::string& fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) fail(where, "expected an array of numbers");
    out.push_back(e.get<double>());
    if (!std::isfinite(out.back())) fail(where, "entries must be finite");
  }
  return out;
}

ProblemConfig parse_problem(const json& j) {
  const std::string where = "problem";
  require_object(j, where);
  ProblemConfig p;
  const std::string kind = text(j, "kind", "", where);
  if (kind == "diagonal") {
    allow_keys(j, {"kind", "sigma", "dim", "sigma_scale", "x_true", "rho"}, where);
    p.kind = ProblemConfig::Kind::Diagonal;
    if (j.contains("sigma")) p.sigma = numbers(j.at("sigma"), where + ".sigma");
    p.dim = integer(j, "dim", p.dim, where);
    p.sigma_scale = number(j, "sigma_scale", p.sigma_scale, where);
    if (j.contains("x_true")) p.x_true = numbers(j.at("x_true"), where + ".x_true");
    if (p.sigma.empty() && p.dim < 1) fail(where + ".dim", "must be positive");
    if (!(p.sigma_scale > 0.0)) fail(where + ".sigma_scale", "must be positive");
    const long dim = p.sigma.empty() ? p.dim : static_cast<long>(p.sigma.size());
    if (!p.x_true.empty() && static_cast<long>(p.x_true.size()) != dim)
      fail(where + ".x_true", "length must match the number of singular values");
  } else if (kind == "elliptic") {
    allow_keys(j, {"kind", "n", "f", "g0", "g1", "c_base", "c_amplitude", "c_frequency", "rho"}, where);
    p.kind = ProblemConfig::Kind::Elliptic;
    p.rho = 10.0;
    p.n = integer(j, "n", p.n, where);
    p.f = number(j, "f", p.f, where);
    p.g0 = number(j, "g0", p.g0, where);
    p.g1 = number(j, "g1", p.g1, where);
    p.c_base = number(j, "c_base", p.c_base, where);
    p.c_amplitude = number(j, "c_amplitude", p.c_amplitude, where);
    p.c_frequency = number(j, "c_frequency", p.c_frequency, where);
    if (p.n < 8) fail(where + ".n", "must be at least 8");
    if (p.c_base - std::abs(p.c_amplitude) < 0.0) fail(where, "c_true must be nonnegative");
  } else {
    fail(where + ".kind", "expected 'diagonal' or 'elliptic'");
  }
  p.rho = number(j, "rho", p.rho, where);
  if (!(p.rho > 0.0)) fail(where + ".rho", "must be positive");
  return p;
}

FilterFamily parse_filter(const json& j) {
  const std::string where = "filter";
  require_object(j, where);
  allow_keys(j, {"kind", "order", "literal_summation"}, where);
  const std::string kind = text(j, "kind", "", where);
  const bool literal = boolean(j, "literal_summation", false, where);
  if (literal && kind != "lardy") fail(where + ".literal_summation", "only applies to the lardy filter");
  if (j.contains("order") && kind != "iterated_tikhonov") fail(where + ".order", "only applies to iterated_tikhonov");
  if (kind == "iterated_tikhonov") {
    const long m = integer(j, "order", 1, where);
    if (m < 1 || m > 1000) fail(where + ".order", "must be between 1 and 1000");
    return FilterFamily::iterated_tikhonov(static_cast<int>(m));
  }
  if (kind == "landweber") return FilterFamily::landweber();
  if (kind == "lardy") return literal ? FilterFamily::lardy_literal() : FilterFamily::lardy();
  if (kind == "exponential") return FilterFamily::exponential();
  fail(where + ".kind", "expected iterated_tikhonov, landweber, lardy or exponential");
}

AlphaSchedule parse_schedule(const json& j) {
  const std::string where = "schedule";
  require_object(j, where);
  const std::string kind = text(j, "kind", "", where);
  try {
    if (kind == "geometric") {
      allow_keys(j, {"kind", "alpha0", "rho"}, where);
      return AlphaSchedule::geometric(number(j, "alpha0", 1.0, where), number(j, "rho", 2.0, where));
    }
    if (kind == "arith_reciprocal_int") {
      allow_keys(j, {"kind", "n0", "q"}, where);
      return AlphaSchedule::arith_reciprocal_int(integer(j, "n0", 1, where), integer(j, "q", 1, where));
    }
    if (kind == "arith_reciprocal_real") {
      allow_keys(j, {"kind", "t0", "theta0"}, where);
      return AlphaSchedule::arith_reciprocal_real(number(j, "t0", 1.0, where), number(j, "theta0", 1.0, where));
    }
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
  fail(where + ".kind", "expected geometric, arith_reciprocal_int or arith_reciprocal_real");
}

OmegaConfig parse_omega(const json& j) {
  const std::string where = "source.omega";
  OmegaConfig o;
  if (j.is_array()) {
    o.profile = OmegaConfig::Profile::Explicit;
    o.values = numbers(j, where);
    return o;
  }
  require_object(j, where);
  allow_keys(j, {"profile", "exponent", "scale", "norm"}, where);
  const std::string profile = text(j, "profile", "power", where);
  if (profile == "power") {
    o.profile = OmegaConfig::Profile::Power;
  } else if (profile == "sine") {
    o.profile = OmegaConfig::Profile::Sine;
  } else if (profile == "zero") {
    o.profile = OmegaConfig::Profile::Zero;
  } else {
    fail(where + ".profile", "expected power, sine or zero");
  }
  o.exponent = number(j, "exponent", o.exponent, where);
  o.scale = number(j, "scale", o.scale, where);
  if (j.contains("norm")) {
    o.norm = number(j, "norm", 1.0, where);
    if (!(*o.norm > 0.0)) fail(where + ".norm", "must be positive");
    if (o.profile == OmegaConfig::Profile::Zero) fail(where + ".norm", "cannot normalize the zero profile");
  }
  return o;
}

SourceConfig parse_source(const json& j) {
  const std::string where = "source";
  require_object(j, where);
  SourceConfig s;
  const std::string kind = text(j, "kind", "", where);
  if (kind == "holder") {
    allow_keys(j, {"kind", "nu", "omega"}, where);
    s.kind = SourceSpec::Kind::Holder;
    s.exponent = number(j, "nu", 1.0, where);
    if (!(s.exponent >= 0.0)) fail(where + ".nu", "must be nonnegative");
  } else if (kind == "logarithmic") {
    allow_keys(j, {"kind", "mu", "omega"}, where);
    s.kind = SourceSpec::Kind::Logarithmic;
    s.exponent = number(j, "mu", 1.0, where);
    if (!(s.exponent > 0.0)) fail(where + ".mu", "must be positive");
  } else {
    fail(where + ".kind", "expected 'holder' or 'logarithmic'");
  }
  if (!j.contains("omega")) fail(where, "missing 'omega'");
  s.omega = parse_omega(j.at("omega"));
  return s;
}

VerifyConfig parse_verify(const json& j) {
  const std::string where = "verify";
  require_object(j, where);
  allow_keys(j, {"checks", "nus", "mus", "interpolation_trials", "commutator_trials", "schedule_kmax", "samples", "radius", "seed"},
             where);
  VerifyConfig v;
  if (j.contains("checks")) {
    const json& c = j.at("checks");
    if (!c.is_array()) fail(where + ".checks", "expected an array of names");
    v.has_checks = true;
    for (const json& e : c) {
      if (!e.is_string()) fail(where + ".checks", "expected an array of names");
      const std::string name = e.get<std::string>();
      const auto& known = known_checks();
      if (std::find(known.begin(), known.end(), name) == known.end()) fail(where + ".checks", "unknown check " + name);
      v.checks.push_back(name);
    }
  }
  if (j.contains("nus")) v.nus = numbers(j.at("nus"), where + ".nus");
  if (j.contains("mus")) v.mus = numbers(j.at("mus"), where + ".mus");
  v.interpolation_trials = static_cast<int>(integer(j, "interpolation_trials", v.interpolation_trials, where));
  v.commutator_trials = static_cast<int>(integer(j, "commutator_trials", v.commutator_trials, where));
  v.schedule_kmax = integer(j, "schedule_kmax", v.schedule_kmax, where);
  v.samples = static_cast<int>(integer(j, "samples", v.samples, where));
  if (j.contains("radius")) {
    v.radius = number(j, "radius", 1.0, where);
    if (!(*v.radius > 0.0)) fail(where + ".radius", "must be positive");
  }
  v.seed = static_cast<std::uint64_t>(integer(j, "seed", static_cast<long>(v.seed), where));
  if (v.interpolation_trials < 1 || v.commutator_trials < 1 || v.schedule_kmax < 1 || v.samples < 2)
    fail(where, "trial and sample counts must be positive (samples >= 2)");
  for (double nu : v.nus)
    if (!(nu >= 0.0)) fail(where + ".nus", "must be nonnegative");
  for (double mu : v.mus)
    if (!(mu > 0.0)) fail(where + ".mus", "must be positive");
  return v;
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{
      "residual_bounds", "sqrt_bounds", "qualification", "log_qualification", "schedule_ratio",
      "interpolation",   "commutators", "nonlinearity",  "structured_commutators"};
  return names;
}

ExperimentConfig parse_config(const json& j) {
  require_object(j, "config");
  allow_keys(j,
             {"description", "problem", "filter", "schedule", "source", "tau", "delta_list", "seeds", "kmax",
              "output_dir", "rescale", "stability", "verify"},
             "config");
  ExperimentConfig c;
  if (!j.contains("problem")) fail("config", "missing 'problem'");
  if (!j.contains("filter")) fail("config", "missing 'filter'");
  if (!j.contains("schedule")) fail("config", "missing 'schedule'");
  c.problem = parse_problem(j.at("problem"));
  c.family = parse_filter(j.at("filter"));
  c.schedule = parse_schedule(j.at("schedule"));
  if (j.contains("source")) c.source = parse_source(j.at("source"));
  if (j.contains("verify")) c.verify = parse_verify(j.at("verify"));
  text(j, "description", "", "config");

  c.tau = number(j, "tau", c.tau, "config");
  if (!(c.tau > 1.0)) fail("config.tau", "must exceed 1");
  if (j.contains("delta_list")) c.delta_list = numbers(j.at("delta_list"), "config.delta_list");
  if (c.delta_list.empty()) fail("config.delta_list", "must not be empty");
  for (std::size_t i = 0; i < c.delta_list.size(); ++i) {
    if (!(c.delta_list[i] > 0.0)) fail("config.delta_list", "noise levels must be positive");
    if (i > 0 && !(c.delta_list[i] < c.delta_list[i - 1])) fail("config.delta_list", "must be strictly decreasing");
  }
  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    if (!s.is_array()) fail("config.seeds", "expected an array of integers");
    c.seeds.clear();
    for (const json& e : s) {
      if (!e.is_number_integer()) fail("config.seeds", "expected an array of integers");
      c.seeds.push_back(e.get<std::int64_t>());
    }
  }
  if (c.seeds.empty()) fail("config.seeds", "at least one seed is required");
  c.kmax = integer(j, "kmax", c.kmax, "config");
  if (c.kmax < 1) fail("config.kmax", "must be at least 1");
  c.output_dir = text(j, "output_dir", c.output_dir, "config");
  if (c.output_dir.empty()) fail("config.output_dir", "must not be empty");
  c.rescale = boolean(j, "rescale", c.rescale, "config");
  c.stability = boolean(j, "stability", c.stability, "config");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(path + ": " + e.what());
  }
  return parse_config(j);
}

namespace {

Eigen::VectorXd omega_entries(const OmegaConfig& o, const Eigen::VectorXd& grid) {
  const Eigen::Index n = grid.size();
  Eigen::VectorXd w(n);
  switch (o.profile) {
    case OmegaConfig::Profile::Explicit:
      if (static_cast<Eigen::Index>(o.values.size()) != n) fail("source.omega", "length does not match the problem");
      for (Eigen::Index i = 0; i < n; ++i) w[i] = o.values[i];
      break;
    case OmegaConfig::Profile::Power:
      for (Eigen::Index i = 0; i < n; ++i) w[i] = o.scale * std::pow(static_cast<double>(i + 1), o.exponent);
      break;
    case OmegaConfig::Profile::Sine:
      for (Eigen::Index i = 0; i < n; ++i) w[i] = o.scale * std::sin(std::numbers::pi * grid[i]);
      break;
    case OmegaConfig::Profile::Zero:
      w.setZero();
      break;
  }
  return w;
}

}  // namespace

Setup build_setup(const ExperimentConfig& config) {
  const ProblemConfig& pc = config.problem;
  NonlinearProblem problem = [&]() {
    if (pc.kind == ProblemConfig::Kind::Diagonal) {
      Eigen::VectorXd sigma;
      if (!pc.sigma.empty()) {
        sigma = Eigen::Map<const Eigen::VectorXd>(pc.sigma.data(), static_cast<Eigen::Index>(pc.sigma.size()));
      } else {
        sigma.resize(pc.dim);
        for (Eigen::Index i = 0; i < pc.dim; ++i)
          sigma[i] = std::min(pc.sigma_scale / static_cast<double>(i + 1), 1.0 / std::sqrt(2.0));
      }
      Eigen::VectorXd xt(sigma.size());
      for (Eigen::Index i = 0; i < xt.size(); ++i)
        xt[i] = pc.x_true.empty() ? 1.0 / static_cast<double>(i + 1) : pc.x_true[i];
      return diagonal_problem(sigma, pc.rho).with_solution(Vector::from(xt));
    }
    const Eigen::VectorXd x = elliptic_grid(pc.n);
    const Eigen::VectorXd f = Eigen::VectorXd::Constant(pc.n, pc.f);
    Eigen::VectorXd c(pc.n);
    for (Eigen::Index i = 0; i < pc.n; ++i)
      c[i] = pc.c_base + pc.c_amplitude * std::sin(pc.c_frequency * std::numbers::pi * x[i]);
    return elliptic_problem(pc.n, f, pc.g0, pc.g1, c, pc.rho);
  }();

  double scale = 1.0;
  if (config.rescale) {
    RescaledProblem r = rescale_problem(problem, config.family, config.schedule.alpha0(), {*problem.x_true});
    problem = std::move(r.problem);
    scale = r.scale;
  }

  Vector x0 = *problem.x_true;
  double omega_norm = 0.0, dropped = 0.0;
  if (config.source) {
    const Eigen::VectorXd grid = elliptic_grid(problem.dim_x());
    Vector omega(problem.space_x, omega_entries(config.source->omega, grid));
    if (config.source->omega.norm) {
      const double nn = norm(omega);
      if (!(nn > 0.0)) fail("source.omega", "cannot normalize a zero profile");
      omega *= *config.source->omega.norm / nn;
    }
    omega_norm = norm(omega);
    const SourceSpec spec = config.source->kind == SourceSpec::Kind::Holder
                                ? SourceSpec::holder(config.source->exponent, omega)
                                : SourceSpec::logarithmic(config.source->exponent, omega);
    InitialGuess guess = construct_initial_guess(problem, spec);
    x0 = std::move(guess.x0);
    dropped = guess.dropped_norm;
  }
  Vector y = problem.exact_data();
  return Setup{std::move(problem), config.family, config.schedule, std::move(x0), std::move(y), scale, omega_norm,
               dropped};
}

}  // namespace regnewt::experiment
