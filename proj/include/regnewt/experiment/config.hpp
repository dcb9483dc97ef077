#pragma once

#include "regnewt/filters.hpp"
#include "regnewt/problem.hpp"
#include "regnewt/problems.hpp"
#include "regnewt/schedule.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace regnewt::experiment {

/// How omega is generated on the parameter grid.
///  - explicit: `values`
///  - power: scale * i^exponent, i = 1..n
///  - sine: sin(pi x_i) on the elliptic grid (or i/(n+1) for diagonal problems)
///  - zero: omega = 0, i.e. x0 = x_true
/// If `norm` is set the profile is rescaled to that norm afterwards.
struct OmegaConfig {
  enum class Profile { Explicit, Power, Sine, Zero };
  Profile profile = Profile::Power;
  double exponent = -0.5;
  double scale = 1.0;
  std::optional<double> norm;
  std::vector<double> values;
};

struct SourceConfig {
  SourceSpec::Kind kind = SourceSpec::Kind::Holder;
  double exponent = 1.0;
  OmegaConfig omega;
};

struct ProblemConfig {
  enum class Kind { Diagonal, Elliptic };
  Kind kind = Kind::Diagonal;
  double rho = 1e6;
  // diagonal: explicit sigma, or sigma_i = min(sigma_scale / i, 1/sqrt(2)) for i = 1..dim
  std::vector<double> sigma;
  long dim = 64;
  double sigma_scale = 0.7;
  std::vector<double> x_true;  // empty: x_i = 1/i
  // elliptic: -u'' + c u = f, c_true = c_base + c_amplitude sin(c_frequency pi x)
  long n = 64;
  double f = 10.0;
  double g0 = 1.0;
  double g1 = 1.0;
  double c_base = 1.0;
  double c_amplitude = 0.5;
  double c_frequency = 2.0;
};

struct VerifyConfig {
  std::vector<std::string> checks;  // empty together with has_checks = false: defaults
  bool has_checks = false;
  std::vector<double> nus{0.5, 1.0, 2.0};
  std::vector<double> mus{1.0};
  int interpolation_trials = 1000;
  int commutator_trials = 200;
  long schedule_kmax = 50;
  int samples = 20;
  /// Sampling radius for the nonlinearity checks; defaults to problem rho.
  std::optional<double> radius;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  ProblemConfig problem;
  FilterFamily family = FilterFamily::landweber();
  AlphaSchedule schedule = AlphaSchedule::arith_reciprocal_int(1, 1);
  std::optional<SourceConfig> source;
  double tau = 1.5;
  std::vector<double> delta_list{1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5};
  std::vector<std::int64_t> seeds{0, 1, 2, 3, 4};
  long kmax = 10000;
  std::string output_dir = "out";
  bool rescale = false;
  bool stability = true;
  VerifyConfig verify;
};

/// Validates the whole tree; unknown keys and out-of-range values throw ConfigurationError.
ExperimentConfig parse_config(const nlohmann::json& j);
/// Reads and parses a JSON file. I/O and syntax errors throw ConfigurationError.
ExperimentConfig load_config(const std::string& path);

/// Names accepted in "verify.checks".
const std::vector<std::string>& known_checks();

/// Problem, data and initial guess derived from a config.
struct Setup {
  NonlinearProblem problem;
  FilterFamily family;
  AlphaSchedule schedule;
  Vector x0;
  Vector y;
  /// Factor applied to F (and to the noise level) by rescaling; 1 without rescaling.
  double scale = 1.0;
  double omega_norm = 0.0;
  double dropped_norm = 0.0;
};

Setup build_setup(const ExperimentConfig& config);

}  // namespace regnewt::experiment
