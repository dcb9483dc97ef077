#pragma once

#include "regnewt/experiment/config.hpp"
#include "regnewt/experiment/csv.hpp"
#include "regnewt/verify.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace regnewt::experiment {

struct CommandOptions {
  std::optional<std::string> out;  // overrides config.output_dir
  int workers = 0;                 // 0: hardware concurrency
  std::optional<std::int64_t> seed_override;
  /// Replace the Lardy filter by the literal summation variant.
  bool literal_lardy = false;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Config after command-line overrides. Throws ConfigurationError.
ExperimentConfig apply_options(ExperimentConfig config, const CommandOptions& options);

struct CellOutcome {
  std::size_t delta_index = 0;
  SummaryRow row;
  std::vector<IterationRecord> records;
  std::string message;
};

/// Noise seed of one (delta, seed) cell.
std::uint64_t noise_seed(std::int64_t seed, std::size_t delta_index);

/// One discrepancy run per (delta, seed), ordered by delta then seed. With
/// config.stability, records up to the last iterate carry
/// ‖x_k^delta - x_k‖ sqrt(alpha_k) / delta against a noise-free run.
std::vector<CellOutcome> run_cells(const ExperimentConfig& config, const Setup& setup, int workers);

struct RateRow {
  double delta = 0.0;
  double abscissa = 0.0;  // delta or (1 + |ln(delta/‖omega‖)|)^{-mu}
  double median_error = 0.0;
  long k_min = 0;
  long k_max = 0;
};

struct RateFit {
  SourceSpec::Kind kind = SourceSpec::Kind::Holder;
  double nu_or_mu = 0.0;
  /// 2nu/(1+2nu) for Holder sources, 1 for logarithmic ones.
  double theoretical_exponent = 0.0;
  double fitted_slope = 0.0;
  double fitted_intercept = 0.0;
  std::vector<RateRow> rows;
  /// max / min of median_error / abscissa.
  double ratio_span = 0.0;
  /// median error strictly increasing in the abscissa.
  bool monotone = false;
};

double theoretical_exponent(SourceSpec::Kind kind, double nu_or_mu);
/// (1 + |ln(delta / omega_norm)|)^{-mu}.
double log_abscissa(double delta, double omega_norm, double mu);

/// Least squares of ln median error on ln abscissa; needs at least 4 noise levels
/// (InsufficientDataError otherwise). Every cell must carry a final error.
RateFit fit_rates(const std::vector<CellOutcome>& cells, const std::vector<double>& delta_list,
                  SourceSpec::Kind kind, double nu_or_mu, double omega_norm);

/// Reports of the selected checks (config.verify.checks, or every applicable one).
std::vector<CheckReport> run_checks(const ExperimentConfig& config, const Setup& setup);
void print_reports(std::ostream& out, const std::vector<CheckReport>& reports);
void write_reports_csv(const std::string& path, const std::vector<CheckReport>& reports);

int cmd_run(const std::string& config_path, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_rate_study(const std::string& config_path, const CommandOptions& options, std::ostream& out,
                   std::ostream& err);
int cmd_verify(const std::string& config_path, const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace regnewt::experiment
