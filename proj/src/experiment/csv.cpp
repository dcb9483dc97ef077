#include "regnewt/experiment/csv.hpp"

#include "regnewt/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace regnewt::experiment {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    // from_chars rejects "inf"/"nan" spellings from printf on some libraries.
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan" || text == "-nan") return std::numeric_limits<double>::quiet_NaN();
    throw ConfigurationError("not a number: '" + text + "'");
  }
  return v;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

long parse_long(const std::string& s) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigurationError("not an integer: '" + s + "'");
  return v;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  return out;
}

std::vector<std::vector<std::string>> read_table(const fs::path& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) throw ConfigurationError(path.string() + ": unexpected header");
  const std::size_t columns = split(header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != columns) throw ConfigurationError(path.string() + ": wrong number of fields");
    rows.push_back(std::move(fields));
  }
  return rows;
}

const std::string kRecordsHeader = "k,alpha,residual,error,stability_ratio";
const std::string kSummaryHeader = "delta,seed,tau,delta_effective,status,k_delta,final_residual,final_error,file";

}  // namespace

void write_records_csv(const fs::path& path, const std::vector<IterationRecord>& records) {
  std::ofstream out = open_out(path);
  out << kRecordsHeader << '\n';
  for (const IterationRecord& r : records)
    out << r.k << ',' << format_double(r.alpha) << ',' << format_double(r.residual_norm) << ','
        << optional_field(r.error_norm) << ',' << optional_field(r.stability_ratio) << '\n';
}

std::vector<IterationRecord> read_records_csv(const fs::path& path) {
  std::vector<IterationRecord> records;
  for (const auto& f : read_table(path, kRecordsHeader)) {
    IterationRecord r;
    r.k = parse_long(f[0]);
    r.alpha = parse_double(f[1]);
    r.residual_norm = parse_double(f[2]);
    r.error_norm = parse_optional(f[3]);
    r.stability_ratio = parse_optional(f[4]);
    records.push_back(r);
  }
  return records;
}

void write_summary_csv(const fs::path& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out = open_out(path);
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : rows)
    out << format_double(r.delta) << ',' << r.seed << ',' << format_double(r.tau) << ','
        << format_double(r.delta_effective) << ',' << r.status << ','
        << (r.k_delta ? std::to_string(*r.k_delta) : std::string()) << ',' << format_double(r.final_residual) << ','
        << optional_field(r.final_error) << ',' << r.file << '\n';
}

std::vector<SummaryRow> read_summary_csv(const fs::path& path) {
  std::vector<SummaryRow> rows;
  for (const auto& f : read_table(path, kSummaryHeader)) {
    SummaryRow r;
    r.delta = parse_double(f[0]);
    r.seed = parse_long(f[1]);
    r.tau = parse_double(f[2]);
    r.delta_effective = parse_double(f[3]);
    r.status = f[4];
    if (!f[5].empty()) r.k_delta = parse_long(f[5]);
    r.final_residual = parse_double(f[6]);
    r.final_error = parse_optional(f[7]);
    r.file = f[8];
    rows.push_back(std::move(r));
  }
  return rows;
}

OutputValidation validate_output_dir(const fs::path& dir) {
  OutputValidation v;
  for (const SummaryRow& row : read_summary_csv(dir / "summary.csv")) {
    const std::string cell = "delta=" + format_double(row.delta) + " seed=" + std::to_string(row.seed);
    if (row.status != to_string(RunStatus::StoppedByDiscrepancy)) continue;
    ++v.stopped_runs;
    if (!row.k_delta) {
      v.failures.push_back(cell + ": stopped run without k_delta");
      continue;
    }
    const std::vector<IterationRecord> records = read_records_csv(dir / row.file);
    if (!discrepancy_postcondition_holds(records, *row.k_delta, row.tau, row.delta_effective))
      v.failures.push_back(cell + ": discrepancy postcondition violated at k=" + std::to_string(*row.k_delta));
  }
  return v;
}

}  // namespace regnewt::experiment
