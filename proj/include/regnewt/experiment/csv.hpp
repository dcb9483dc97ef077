#pragma once

#include "regnewt/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace regnewt::experiment {

/// 17 significant digits, so that parsing the text gives back the same double.
std::string format_double(double value);
/// Strict decimal parse; throws ConfigurationError on trailing characters.
double parse_double(const std::string& text);

/// Header: k,alpha,residual,error,stability_ratio. Missing values are empty fields.
void write_records_csv(const std::filesystem::path& path, const std::vector<IterationRecord>& records);
std::vector<IterationRecord> read_records_csv(const std::filesystem::path& path);

struct SummaryRow {
  double delta = 0.0;
  std::int64_t seed = 0;
  double tau = 0.0;
  /// Noise level handed to the solver (delta times the rescaling factor).
  double delta_effective = 0.0;
  std::string status;
  std::optional<long> k_delta;
  double final_residual = 0.0;
  std::optional<double> final_error;
  /// Records file, relative to the summary.
  std::string file;
  bool operator==(const SummaryRow&) const = default;
};

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

struct OutputValidation {
  int stopped_runs = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Reads summary.csv and every records file it lists, and recomputes the
/// discrepancy postcondition for each stopped run from the files alone.
OutputValidation validate_output_dir(const std::filesystem::path& dir);

}  // namespace regnewt::experiment
