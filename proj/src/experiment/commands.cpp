#include "regnewt/experiment/commands.hpp"

#include "regnewt/errors.hpp"
#include "regnewt/experiment/svg.hpp"
#include "regnewt/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace regnewt::experiment {

namespace fs = std::filesystem;

namespace {

// Runs body(i) for i < n on up to `workers` threads; rethrows the first exception.
template <class Body>
void parallel_for(std::size_t n, int workers, Body body) {
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers)
                                    : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  if (threads > 0) worker();
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Prepared {
  ExperimentConfig config;
  std::optional<Setup> setup;
  fs::path out;
};

// Parses and sets up everything before touching the file system.
std::optional<Prepared> prepare(const std::string& path, const CommandOptions& options, bool need_compatible,
                                std::ostream& err) {
  try {
    Prepared p;
    p.config = apply_options(load_config(path), options);
    if (need_compatible) require_compatible(p.config.family, p.config.schedule);
    p.setup = build_setup(p.config);
    p.out = p.config.output_dir;
    return p;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return std::nullopt;
}

std::vector<SummaryRow> summary_rows(const std::vector<CellOutcome>& cells) {
  std::vector<SummaryRow> rows;
  for (const CellOutcome& c : cells) rows.push_back(c.row);
  return rows;
}

void write_cells(const fs::path& out, const std::vector<CellOutcome>& cells) {
  fs::create_directories(out / "runs");
  for (const CellOutcome& c : cells) write_records_csv(out / c.row.file, c.records);
  write_summary_csv(out / "summary.csv", summary_rows(cells));
}

void print_cells(std::ostream& out, const std::vector<CellOutcome>& cells) {
  out << std::left << std::setw(14) << "delta" << std::setw(8) << "seed" << std::setw(24) << "status"
      << std::setw(10) << "k_delta" << "final_error\n";
  for (const CellOutcome& c : cells) {
    out << std::setw(14) << fmt("%.6g", c.row.delta) << std::setw(8) << c.row.seed << std::setw(24) << c.row.status
        << std::setw(10) << (c.row.k_delta ? std::to_string(*c.row.k_delta) : std::string("-"))
        << (c.row.final_error ? fmt("%.6e", *c.row.final_error) : std::string("-")) << '\n';
  }
}

bool all_stopped(const std::vector<CellOutcome>& cells, std::ostream& err) {
  bool ok = true;
  for (const CellOutcome& c : cells) {
    if (c.row.status == to_string(RunStatus::StoppedByDiscrepancy)) continue;
    ok = false;
    err << "cell delta=" << fmt("%.6g", c.row.delta) << " seed=" << c.row.seed << " did not stop by discrepancy: "
        << c.row.status << (c.message.empty() ? "" : " (" + c.message + ")") << '\n';
  }
  return ok;
}

bool validate(const fs::path& out, std::ostream& err) {
  const OutputValidation v = validate_output_dir(out);
  for (const std::string& f : v.failures) err << "validation: " << f << '\n';
  return v.ok();
}

}  // namespace

ExperimentConfig apply_options(ExperimentConfig config, const CommandOptions& options) {
  if (options.out) {
    if (options.out->empty()) throw ConfigurationError("--out must not be empty");
    config.output_dir = *options.out;
  }
  if (options.seed_override) config.seeds = {*options.seed_override};
  if (options.literal_lardy) {
    if (config.family.kind() != FilterKind::Lardy)
      throw ConfigurationError("--literal-lardy needs a lardy filter in the config");
    config.family = FilterFamily::lardy_literal();
  }
  if (options.workers < 0) throw ConfigurationError("--workers must be nonnegative");
  return config;
}

std::uint64_t noise_seed(std::int64_t seed, std::size_t delta_index) {
  return static_cast<std::uint64_t>(seed) * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL * (delta_index + 1);
}

std::vector<CellOutcome> run_cells(const ExperimentConfig& config, const Setup& setup, int workers) {
  struct Cell {
    std::size_t di;
    std::int64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t di = 0; di < config.delta_list.size(); ++di)
    for (std::int64_t seed : config.seeds) cells.push_back({di, seed});

  std::vector<CellOutcome> outcomes(cells.size());
  std::vector<std::vector<Vector>> iterates(cells.size());
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    const Cell& cell = cells[i];
    CellOutcome& o = outcomes[i];
    o.delta_index = cell.di;
    const double delta = config.delta_list[cell.di];
    const double delta_eff = delta * setup.scale;
    o.row.delta = delta;
    o.row.seed = cell.seed;
    o.row.tau = config.tau;
    o.row.delta_effective = delta_eff;
    o.row.file = "runs/delta" + std::to_string(cell.di) + "_seed" + std::to_string(cell.seed) + ".csv";
    SolverConfig sc;
    sc.tau = config.tau;
    sc.delta = delta_eff;
    sc.kmax = config.kmax;
    sc.store_iterates = config.stability;
    try {
      const Vector ydelta = make_noisy(setup.y, delta_eff, noise_seed(cell.seed, cell.di));
      RunResult r = run_discrepancy(setup.problem, setup.family, setup.schedule, sc, setup.x0, ydelta);
      o.row.status = to_string(r.status);
      o.row.k_delta = r.k_delta;
      o.message = r.message;
      o.records = std::move(r.records);
      iterates[i] = std::move(r.iterates);
    } catch (const Error& e) {
      o.row.status = "error";
      o.message = e.what();
    }
    if (!o.records.empty()) {
      o.row.final_residual = o.records.back().residual_norm;
      o.row.final_error = o.records.back().error_norm;
    }
  });

  if (config.stability) {
    std::size_t longest = 0;
    for (const auto& it : iterates) longest = std::max(longest, it.size());
    if (longest > 0) {
      const RunResult reference = run_noise_free(setup.problem, setup.family, setup.schedule,
                                                 static_cast<long>(longest) - 1, setup.x0, setup.y);
      const std::vector<Vector>& ref = reference.iterates;
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const double delta_eff = outcomes[i].row.delta_effective;
        std::vector<IterationRecord>& recs = outcomes[i].records;
        for (std::size_t k = 0; k < iterates[i].size() && k < ref.size() && k < recs.size(); ++k)
          recs[k].stability_ratio = norm(iterates[i][k] - ref[k]) * std::sqrt(recs[k].alpha) / delta_eff;
      }
    }
  }
  return outcomes;
}

double theoretical_exponent(SourceSpec::Kind kind, double nu_or_mu) {
  if (kind == SourceSpec::Kind::Logarithmic) return 1.0;
  return 2.0 * nu_or_mu / (1.0 + 2.0 * nu_or_mu);
}

double log_abscissa(double delta, double omega_norm, double mu) {
  if (!(delta > 0.0) || !(omega_norm > 0.0)) throw DomainError("logarithmic abscissa needs delta, ‖omega‖ > 0");
  return std::pow(1.0 + std::abs(std::log(delta / omega_norm)), -mu);
}

RateFit fit_rates(const std::vector<CellOutcome>& cells, const std::vector<double>& delta_list,
                  SourceSpec::Kind kind, double nu_or_mu, double omega_norm) {
  if (delta_list.size() < 4) throw InsufficientDataError("a rate fit needs at least 4 noise levels");
  RateFit fit;
  fit.kind = kind;
  fit.nu_or_mu = nu_or_mu;
  fit.theoretical_exponent = theoretical_exponent(kind, nu_or_mu);
  for (std::size_t di = 0; di < delta_list.size(); ++di) {
    std::vector<double> errors;
    RateRow row;
    row.delta = delta_list[di];
    row.k_min = std::numeric_limits<long>::max();
    double delta_eff = row.delta;
    for (const CellOutcome& c : cells) {
      if (c.delta_index != di) continue;
      if (!c.row.final_error || !c.row.k_delta)
        throw InsufficientDataError("cell delta=" + fmt("%.6g", c.row.delta) + " seed=" +
                                    std::to_string(c.row.seed) + " has no error at k_delta");
      errors.push_back(*c.row.final_error);
      row.k_min = std::min(row.k_min, *c.row.k_delta);
      row.k_max = std::max(row.k_max, *c.row.k_delta);
      delta_eff = c.row.delta_effective;
    }
    if (errors.empty()) throw InsufficientDataError("no cell for delta=" + fmt("%.6g", row.delta));
    row.median_error = median(errors);
    row.abscissa = kind == SourceSpec::Kind::Holder ? delta_eff : log_abscissa(delta_eff, omega_norm, nu_or_mu);
    fit.rows.push_back(row);
  }

  double sx = 0.0, sy = 0.0;
  const double n = static_cast<double>(fit.rows.size());
  for (const RateRow& r : fit.rows) {
    if (!(r.median_error > 0.0)) throw InsufficientDataError("median error vanishes; no log-log fit possible");
    sx += std::log(r.abscissa);
    sy += std::log(r.median_error);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const RateRow& r : fit.rows) {
    const double dx = std::log(r.abscissa) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(r.median_error) - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("abscissae coincide; no slope");
  fit.fitted_slope = sxy / sxx;
  fit.fitted_intercept = my - fit.fitted_slope * mx;

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const RateRow& r : fit.rows) {
    lo = std::min(lo, r.median_error / r.abscissa);
    hi = std::max(hi, r.median_error / r.abscissa);
  }
  fit.ratio_span = hi / lo;
  std::vector<RateRow> sorted = fit.rows;
  std::sort(sorted.begin(), sorted.end(), [](const RateRow& a, const RateRow& b) { return a.abscissa < b.abscissa; });
  fit.monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (!(sorted[i].median_error > sorted[i - 1].median_error)) fit.monotone = false;
  return fit;
}

std::vector<CheckReport> run_checks(const ExperimentConfig& config, const Setup& setup) {
  const VerifyConfig& v = config.verify;
  const std::vector<std::string> names = v.has_checks ? v.checks : known_checks();
  const FilterFamily& family = setup.family;
  const std::vector<double> lambdas = standard_lambda_grid();
  const std::vector<double> alphas = standard_alpha_grid();
  const double radius = v.radius.value_or(setup.problem.rho);
  std::vector<CheckReport> out;
  auto append = [&out](std::vector<CheckReport> more) {
    for (CheckReport& r : more) out.push_back(std::move(r));
  };
  for (const std::string& name : names) {
    if (name == "residual_bounds") {
      append(check_residual_bounds(family, lambdas, alphas));
    } else if (name == "sqrt_bounds") {
      append(check_sqrt_bounds(family, lambdas, alphas));
    } else if (name == "qualification") {
      const double q = family_constants(family).qualification;
      std::vector<double> nus;
      for (double nu : v.nus)
        if (nu <= q) nus.push_back(nu);
      append(check_qualification(family, nus, lambdas, alphas));
    } else if (name == "log_qualification") {
      append(check_log_qualification(family, v.mus, alphas, setup.schedule.alpha0(), lambdas));
    } else if (name == "schedule_ratio") {
      try {
        require_compatible(family, setup.schedule);
        out.push_back(check_schedule_ratio(family, setup.schedule, v.schedule_kmax, lambdas));
      } catch (const ScheduleCompatibilityError& e) {
        out.push_back(make_report("schedule ratio r_k / r_{k+1} <= c5", std::numeric_limits<double>::infinity(), 0.0,
                                  e.what()));
      }
    } else if (name == "interpolation") {
      out.push_back(check_interpolation_inequality(family, v.interpolation_trials, v.seed));
    } else if (name == "commutators") {
      append(check_commutators(family, v.commutator_trials, log_grid(1e-3, 1.0, 13), v.seed));
    } else if (name == "nonlinearity") {
      append(estimate_nonlinearity(setup.problem, v.samples, v.seed, radius));
    } else if (name == "structured_commutators") {
      append(check_structured_commutators(setup.problem, family,
                                          sample_ball_pairs(setup.problem, v.samples, radius, v.seed + 7), alphas));
    }
  }
  return out;
}

namespace {

std::string status_of(const CheckReport& r) {
  if (r.passed) return r.heuristic ? "INFO" : "PASS";
  return r.heuristic ? "WARN" : "FAIL";
}

std::string bound_text(const CheckReport& r) {
  if (!r.bound) return "-";
  if (*r.bound == kFiniteBound) return "finite";
  return fmt("%.6g", *r.bound);
}

}  // namespace

void print_reports(std::ostream& out, const std::vector<CheckReport>& reports) {
  out << std::left << std::setw(6) << "status" << ' ' << std::setw(14) << "measured" << std::setw(10) << "bound"
      << "check\n";
  for (const CheckReport& r : reports) {
    out << std::setw(6) << status_of(r) << ' ' << std::setw(14) << fmt("%.6g", r.measured) << std::setw(10)
        << bound_text(r) << r.name;
    if (!r.worst_case.empty()) out << "  [" << r.worst_case << ']';
    out << '\n';
  }
}

void write_reports_csv(const std::string& path, const std::vector<CheckReport>& reports) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write " + path);
  out << "name,measured,bound,passed,heuristic,worst_case\n";
  for (const CheckReport& r : reports)
    out << csv_quote(r.name) << ',' << format_double(r.measured) << ','
        << (r.bound ? format_double(*r.bound) : std::string()) << ',' << (r.passed ? 1 : 0) << ','
        << (r.heuristic ? 1 : 0) << ',' << csv_quote(r.worst_case) << '\n';
}

int cmd_run(const std::string& config_path, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  std::optional<Prepared> p = prepare(config_path, options, true, err);
  if (!p) return kExitUsage;
  const std::vector<CellOutcome> cells = run_cells(p->config, *p->setup, options.workers);
  write_cells(p->out, cells);
  print_cells(out, cells);
  const bool stopped = all_stopped(cells, err);
  const bool valid = validate(p->out, err);
  return stopped && valid ? kExitOk : kExitFailure;
}

int cmd_rate_study(const std::string& config_path, const CommandOptions& options, std::ostream& out,
                   std::ostream& err) {
  std::optional<Prepared> p = prepare(config_path, options, true, err);
  if (!p) return kExitUsage;
  const ExperimentConfig& c = p->config;
  if (!c.source) {
    err << "error: a rate study needs a source condition\n";
    return kExitUsage;
  }
  if (c.delta_list.size() < 4) {
    err << "error: a rate study needs at least 4 noise levels\n";
    return kExitUsage;
  }
  const std::vector<CellOutcome> cells = run_cells(c, *p->setup, options.workers);
  write_cells(p->out, cells);
  print_cells(out, cells);
  if (!all_stopped(cells, err)) {
    err << "rate study aborted\n";
    return kExitFailure;
  }
  if (!validate(p->out, err)) return kExitFailure;

  const RateFit fit = fit_rates(cells, c.delta_list, c.source->kind, c.source->exponent, p->setup->omega_norm);
  const bool holder = fit.kind == SourceSpec::Kind::Holder;
  {
    std::ofstream f(p->out / "rate_table.csv");
    f << "delta,abscissa,median_error,k_min,k_max\n";
    for (const RateRow& r : fit.rows)
      f << format_double(r.delta) << ',' << format_double(r.abscissa) << ',' << format_double(r.median_error) << ','
        << r.k_min << ',' << r.k_max << '\n';
  }
  {
    std::ofstream f(p->out / "rate_fit.csv");
    f << "kind,nu_or_mu,theoretical_exponent,fitted_slope,fitted_intercept,ratio_span,monotone,points\n"
      << (holder ? "holder" : "logarithmic") << ',' << format_double(fit.nu_or_mu) << ','
      << format_double(fit.theoretical_exponent) << ',' << format_double(fit.fitted_slope) << ','
      << format_double(fit.fitted_intercept) << ',' << format_double(fit.ratio_span) << ','
      << (fit.monotone ? 1 : 0) << ',' << fit.rows.size() << '\n';
  }
  RatePlot plot;
  plot.title = holder ? "error at k_delta, Holder source nu=" + fmt("%g", fit.nu_or_mu)
                      : "error at k_delta, logarithmic source mu=" + fmt("%g", fit.nu_or_mu);
  plot.x_label = holder ? "delta" : "(1 + |ln(delta/‖omega‖)|)^(-mu)";
  plot.y_label = "median error";
  for (const RateRow& r : fit.rows) {
    plot.x.push_back(r.abscissa);
    plot.y.push_back(r.median_error);
  }
  plot.fitted_slope = fit.fitted_slope;
  plot.fitted_intercept = fit.fitted_intercept;
  plot.reference_slope = fit.theoretical_exponent;
  double mx = 0.0, my = 0.0;
  for (const RateRow& r : fit.rows) {
    mx += std::log(r.abscissa);
    my += std::log(r.median_error);
  }
  mx /= static_cast<double>(fit.rows.size());
  my /= static_cast<double>(fit.rows.size());
  plot.reference_intercept = my - fit.theoretical_exponent * mx;
  plot.fitted_label = "fit, slope " + fmt("%.4f", fit.fitted_slope);
  plot.reference_label = "theory, slope " + fmt("%.4f", fit.theoretical_exponent);
  {
    std::ofstream f(p->out / "rate_plot.svg");
    f << render_rate_plot(plot);
  }

  out << "\ntheoretical exponent " << fmt("%.6f", fit.theoretical_exponent) << ", fitted slope "
      << fmt("%.6f", fit.fitted_slope) << '\n';
  if (!holder)
    out << "error / abscissa span " << fmt("%.4f", fit.ratio_span) << ", monotone " << (fit.monotone ? "yes" : "no")
        << '\n';
  return kExitOk;
}

int cmd_verify(const std::string& config_path, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  std::optional<Prepared> p = prepare(config_path, options, false, err);
  if (!p) return kExitUsage;
  const std::vector<CheckReport> reports = run_checks(p->config, *p->setup);
  fs::create_directories(p->out);
  write_reports_csv((p->out / "verify_report.csv").string(), reports);
  print_reports(out, reports);
  bool ok = true;
  for (const CheckReport& r : reports) {
    if (r.passed || r.heuristic || !r.bound) continue;
    ok = false;
    err << "FAILED: " << r.name << " measured " << fmt("%.6g", r.measured) << " > " << bound_text(r)
        << " at " << r.worst_case << '\n';
  }
  return ok ? kExitOk : kExitFailure;
}

}  // namespace regnewt::experiment
