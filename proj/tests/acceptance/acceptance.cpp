// Acceptance harness: one line per criterion, nonzero exit when any fails.
// Usage: acceptance [output_dir]

#include "oracles.hpp"

#include "regnewt/errors.hpp"
#include "regnewt/experiment/commands.hpp"
#include "regnewt/experiment/config.hpp"
#include "regnewt/experiment/csv.hpp"
#include "regnewt/filters.hpp"
#include "regnewt/problems.hpp"
#include "regnewt/schedule.hpp"
#include "regnewt/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace regnewt;
using namespace regnewt::experiment;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = std::string(REGNEWT_SOURCE_DIR) + "/configs/";

struct Outcome {
  bool ok = true;
  std::string detail;
};

fs::path g_out;
std::vector<fs::path> g_run_dirs;  // every directory with a summary.csv, re-validated by AC-06

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream s(line);
  for (std::string cell; std::getline(s, cell, ',');) out.push_back(cell);
  return out;
}

// Second line of rate_fit.csv keyed by header.
std::map<std::string, std::string> read_fit(const fs::path& dir) {
  std::ifstream in(dir / "rate_fit.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  const auto h = split(header), r = split(row);
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < h.size() && i < r.size(); ++i) out[h[i]] = r[i];
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<FilterFamily> all_families() { return oracle::families(); }

int run_command(int (*cmd)(const std::string&, const CommandOptions&, std::ostream&, std::ostream&),
                const std::string& config, const fs::path& out, std::string& err_text) {
  CommandOptions opt;
  opt.out = out.string();
  std::ostringstream o, e;
  const int code = cmd(config, opt, o, e);
  err_text = e.str();
  if (fs::exists(out / "summary.csv")) g_run_dirs.push_back(out);
  return code;
}

Outcome ac01_filter_identity() {
  double worst = 0.0;
  for (const auto& f : all_families())
    for (double a : standard_alpha_grid())
      for (double l : standard_lambda_grid())
        worst = std::max(worst, std::abs(eval_r(f, a, l) - (1.0 - l * eval_g(f, a, l))));
  return {worst <= 1e-12, "max |r - (1 - lambda g)| = " + fmt("%.3g", worst)};
}

Outcome ac02_assumption_suite() {
  const auto lg = standard_lambda_grid(), ag = standard_alpha_grid();
  int checked = 0;
  std::string failed;
  auto take = [&](const std::string& who, const CheckReport& r) {
    ++checked;
    if (!r.passed && failed.empty()) failed = who + ": " + r.name + " measured " + fmt("%.6g", r.measured);
  };
  for (const auto& f : all_families()) {
    const FilterConstants c = family_constants(f);
    for (const auto& r : check_residual_bounds(f, lg, ag)) take(f.name(), r);
    for (const auto& r : check_sqrt_bounds(f, lg, ag)) take(f.name(), r);
    for (const auto& r : check_sqrt_bounds(f, lg, ag, std::sqrt(c.c0), std::sqrt(c.c1))) take(f.name() + " (sqrt c0, sqrt c1)", r);
    std::vector<double> nus;
    for (double nu : {0.5, 1.0, 2.0})
      if (nu <= c.qualification) nus.push_back(nu);
    for (const auto& r : check_qualification(f, nus, lg, ag)) take(f.name(), r);
  }
  // Pairings with a ratio bound, and those documented as incompatible.
  const auto geo = {AlphaSchedule::geometric(1.0, 2.0), AlphaSchedule::geometric(0.5, 1.5)};
  const auto arith = {AlphaSchedule::arith_reciprocal_int(1, 1), AlphaSchedule::arith_reciprocal_int(2, 3),
                      AlphaSchedule::arith_reciprocal_real(1.0, 0.5), AlphaSchedule::arith_reciprocal_real(2.0, 1.0)};
  int incompatible = 0;
  for (const auto& f : all_families()) {
    for (const auto& s : arith) take(f.name() + " / " + s.describe(), check_schedule_ratio(f, s, 50));
    for (const auto& s : geo) {
      if (f.kind() == FilterKind::IteratedTikhonov) {
        take(f.name() + " / " + s.describe(), check_schedule_ratio(f, s, 50));
        continue;
      }
      try {
        require_compatible(f, s);
        if (failed.empty()) failed = f.name() + " accepted " + s.describe();
      } catch (const ScheduleCompatibilityError&) {
        ++incompatible;
      }
    }
  }
  if (!failed.empty()) return {false, failed};
  return {true, std::to_string(checked) + " reports pass, " + std::to_string(incompatible) +
                    " geometric pairings rejected"};
}

Outcome ac03_oracle_equivalence() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dim(1, 64);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  std::string where;
  for (const auto& f : all_families())
    for (int t = 0; t < 50; ++t) {
      const int m = t == 0 ? 64 : dim(rng), n = t == 0 ? 64 : dim(rng);
      const Eigen::MatrixXd mat = oracle::with_norm(rng, m, n, 0.05 + 0.65 * u(rng));
      const Eigen::VectorXd b = oracle::gaussian(rng, m, 1).col(0);
      const double alpha = std::pow(10.0, -3.0 * u(rng));
      const Vector h =
          apply_filter(f, alpha, LinearOperator::from_matrix(Space::unit(n), Space::unit(m), mat), Vector::from(b));
      const Eigen::VectorXd ref = oracle::filter_dense(f, alpha, mat, b);
      const double rel = (h.entries() - ref).norm() / ref.norm();
      if (rel > worst) {
        worst = rel;
        where = f.name() + " " + std::to_string(m) + "x" + std::to_string(n) + " alpha=" + fmt("%.3g", alpha);
      }
    }
  return {worst <= 1e-10, "max relative error " + fmt("%.3g", worst) + " (" + where + ")"};
}

Outcome ac04_interpolation() {
  double worst = 0.0;
  std::string who;
  for (const auto& f : all_families()) {
    const CheckReport r = check_interpolation_inequality(f, 1000, 11);
    if (r.measured > worst) {
      worst = r.measured;
      who = f.name();
    }
  }
  // Independent evaluation of both sides with the oracle's matrix functions.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double oracle_worst = 0.0;
  const auto fams = all_families();
  for (int t = 0; t < 1000; ++t) {
    const auto& f = fams[t % fams.size()];
    const Eigen::MatrixXd a = oracle::with_norm(rng, 6, 5, 1.0 / std::sqrt(2.0));
    const Eigen::VectorXd x = oracle::gaussian(rng, 5, 1).col(0), xbar = oracle::gaussian(rng, 5, 1).col(0);
    const double beta = std::pow(10.0, -3.0 * u(rng)), alpha = beta * std::pow(10.0, -2.0 * u(rng));
    const Eigen::VectorXd rbx = oracle::residual_dense(f, beta, a, x);
    const double lhs = (rbx - oracle::residual_dense(f, alpha, a, x)).norm();
    const double rhs = (xbar - rbx).norm() + family_constants(f).c2 / std::sqrt(alpha) * (a * xbar).norm();
    oracle_worst = std::max(oracle_worst, lhs / rhs);
  }
  const bool ok = worst <= 1.0 + 1e-9 && oracle_worst <= 1.0 + 1e-9;
  return {ok, "max LHS/RHS " + fmt("%.6f", worst) + " (" + who + "), oracle side " + fmt("%.6f", oracle_worst)};
}

Outcome ac05_commutators() {
  const auto grid = log_grid(1e-3, 1.0, 13);
  double worst = 0.0;
  std::string failed;
  for (const FilterFamily& f :
       {FilterFamily::iterated_tikhonov(1), FilterFamily::iterated_tikhonov(2), FilterFamily::landweber()}) {
    for (const CheckReport& r : check_commutators(f, 200, grid, 2024)) {
      if (!std::isfinite(r.measured) || !r.passed) {
        if (failed.empty()) failed = f.name() + ": " + r.name + " " + fmt("%.4g", r.measured);
      }
      if (r.name.find("variation") != std::string::npos) worst = std::max(worst, r.measured);
    }
  }
  if (!failed.empty()) return {false, failed};
  return {worst < 4.0, "largest variation over alpha " + fmt("%.3f", worst)};
}

Outcome ac07_holder_rates() {
  std::string detail;
  bool ok = true;
  for (const char* nu : {"0.5", "1", "2"}) {
    const fs::path out = g_out / ("rate_nu" + std::string(nu));
    std::string err;
    if (run_command(cmd_rate_study, kConfigs + "diagonal_holder_nu" + nu + ".json", out, err) != kExitOk)
      return {false, "rate study nu=" + std::string(nu) + " failed: " + err};
    const auto fit = read_fit(out);
    const double slope = std::stod(fit.at("fitted_slope")), theory = std::stod(fit.at("theoretical_exponent"));
    const double nuv = std::stod(nu);
    ok = ok && std::abs(slope - theory) <= 0.12 && std::abs(theory - 2 * nuv / (1 + 2 * nuv)) < 1e-15;
    detail += (detail.empty() ? "" : ", ") + std::string("nu=") + nu + " slope " + fmt("%.4f", slope) + " vs " +
              fmt("%.4f", theory);
  }
  return {ok, detail};
}

Outcome ac08_log_rate() {
  const fs::path out = g_out / "rate_log";
  std::string err;
  if (run_command(cmd_rate_study, kConfigs + "diagonal_log.json", out, err) != kExitOk)
    return {false, "rate study failed: " + err};
  const auto fit = read_fit(out);
  const double span = std::stod(fit.at("ratio_span"));
  const bool monotone = fit.at("monotone") == "1";
  return {monotone && span < 3.0, std::string("monotone ") + (monotone ? "yes" : "no") + ", error/abscissa span " +
                                      fmt("%.3f", span)};
}

Outcome ac09_elliptic() {
  const fs::path out = g_out / "elliptic";
  std::string err;
  const int code = run_command(cmd_run, kConfigs + "elliptic_irgn.json", out, err);
  const auto rows = read_summary_csv(out / "summary.csv");
  std::map<double, std::vector<double>, std::greater<>> errors;
  for (const SummaryRow& r : rows) {
    if (r.status != "stopped_by_discrepancy" || !r.final_error)
      return {false, "delta=" + fmt("%g", r.delta) + " seed=" + std::to_string(r.seed) + " " + r.status};
    errors[r.delta].push_back(*r.final_error);
  }
  if (code != kExitOk || errors.size() < 5) return {false, "run exit " + std::to_string(code) + " " + err};
  std::string detail = "median errors";
  bool ok = true;
  double prev = 0.0;
  for (const auto& [delta, e] : errors) {
    const double m = median(e);
    if (prev > 0.0 && m > 1.2 * prev) ok = false;
    prev = m;
    detail += " " + fmt("%.3g", m);
  }
  return {ok, detail + " (" + std::to_string(rows.size()) + " cells stopped)"};
}

Outcome ac10_stability() {
  nlohmann::json base;
  std::ifstream(kConfigs + "diagonal_holder_nu1.json") >> base;
  base["delta_list"] = {1e-2, 1e-3, 1e-4, 1e-5};
  base["seeds"] = {0, 1, 2};
  base["stability"] = true;
  struct Case {
    std::string label;
    nlohmann::json filter, schedule;
  };
  const nlohmann::json geometric = {{"kind", "geometric"}, {"alpha0", 1.0}, {"rho", 2.0}};
  const nlohmann::json arith = {{"kind", "arith_reciprocal_int"}, {"n0", 1}, {"q", 1}};
  const std::vector<Case> cases{
      {"it1", {{"kind", "iterated_tikhonov"}, {"order", 1}}, geometric},
      {"it2", {{"kind", "iterated_tikhonov"}, {"order", 2}}, geometric},
      {"it3", {{"kind", "iterated_tikhonov"}, {"order", 3}}, geometric},
      {"landweber", {{"kind", "landweber"}}, arith},
      {"lardy", {{"kind", "lardy"}}, arith},
      {"exponential", {{"kind", "exponential"}}, {{"kind", "arith_reciprocal_real"}, {"t0", 1.0}, {"theta0", 1.0}}}};
  fs::create_directories(g_out / "configs");
  std::string detail = "max ratio";
  bool ok = true;
  for (const Case& c : cases) {
    nlohmann::json j = base;
    j["filter"] = c.filter;
    j["schedule"] = c.schedule;
    const fs::path cfg = g_out / "configs" / ("stability_" + c.label + ".json");
    std::ofstream(cfg) << j.dump(2);
    const fs::path out = g_out / ("stability_" + c.label);
    std::string err;
    if (run_command(cmd_run, cfg.string(), out, err) != kExitOk) return {false, c.label + ": " + err};
    double worst = 0.0;
    for (const SummaryRow& r : read_summary_csv(out / "summary.csv")) {
      if (!r.k_delta) return {false, c.label + ": no k_delta"};
      for (const IterationRecord& rec : read_records_csv(out / r.file)) {
        if (rec.k > *r.k_delta) break;
        if (!rec.stability_ratio) return {false, c.label + ": missing ratio at k=" + std::to_string(rec.k)};
        worst = std::max(worst, *rec.stability_ratio);
      }
    }
    ok = ok && worst <= 10.0;
    detail += " " + c.label + "=" + fmt("%.3f", worst);
  }
  return {ok, detail};
}

Outcome ac11_elliptic_derivative() {
  const Eigen::Index n = 64;
  const Eigen::VectorXd x = elliptic_grid(n);
  Eigen::VectorXd c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * x[i]);
  const NonlinearProblem p = elliptic_problem(n, Eigen::VectorXd::Constant(n, 10.0), 1.0, 1.0, c, 10.0);
  std::mt19937_64 rng(7);
  double adjoint = 0.0;
  bool taylor_ok = true;
  std::string taylor;
  for (int t = 0; t < 10; ++t) {
    const Vector at = *p.x_true + p.x_true->with_entries(0.2 * oracle::gaussian(rng, n, 1).col(0));
    const LinearOperator a = p.derivative(at);
    const Vector u = at.with_entries(oracle::gaussian(rng, n, 1).col(0));
    const Vector v = at.with_entries(oracle::gaussian(rng, n, 1).col(0));
    const Vector au = a.apply(u);
    adjoint = std::max(adjoint, std::abs(inner(au, v) - inner(u, a.apply_adjoint(v))) / (norm(au) * norm(v)));

    Vector h = at.with_entries(oracle::gaussian(rng, n, 1).col(0));
    h *= 1.0 / norm(h);
    const Vector f0 = p.forward(at), dh = a.apply(h);
    std::vector<double> ratios;
    for (double s : {1e-1, 1e-2, 1e-3, 1e-4}) ratios.push_back(norm(p.forward(at + s * h) - f0 - s * dh) / (s * s));
    for (std::size_t i = 1; i < ratios.size(); ++i) {
      const double q = ratios[i] / ratios[i - 1];
      if (!(q > 0.8 && q < 1.25)) taylor_ok = false;
    }
    if (t == 0) taylor = fmt("%.4g", ratios.front()) + ".." + fmt("%.4g", ratios.back());
  }
  return {adjoint <= 1e-10 && taylor_ok,
          "adjoint defect " + fmt("%.2g", adjoint) + ", remainder/t^2 over t=1e-1..1e-4: " + taylor};
}

Outcome ac12_literal_lardy() {
  const auto reports =
      check_residual_bounds(FilterFamily::lardy_literal(), standard_lambda_grid(), standard_alpha_grid());
  const CheckReport& pos = reports.front();
  double alpha = 0.0, lambda = 0.0;
  if (pos.passed || std::sscanf(pos.worst_case.c_str(), "alpha=%lf lambda=%lf", &alpha, &lambda) != 2)
    return {false, "no witness: " + pos.worst_case};
  const long double r = oracle::r(FilterFamily::lardy_literal(), alpha, lambda);
  const long double corrected = oracle::r(FilterFamily::lardy(), alpha, lambda);
  return {r <= 0.0L && corrected > 0.0L,
          "witness " + pos.worst_case + ", oracle r=" + fmt("%.3g", static_cast<double>(r)) + ", corrected r=" +
              fmt("%.3g", static_cast<double>(corrected))};
}

Outcome ac06_postcondition() {
  // Trivial and plain-run outputs join the dirs produced above.
  std::string err;
  run_command(cmd_run, kConfigs + "trivial.json", g_out / "trivial", err);
  run_command(cmd_run, kConfigs + "diagonal_holder_nu1.json", g_out / "run_nu1", err);
  long stopped = 0;
  for (const fs::path& dir : g_run_dirs) {
    const OutputValidation v = validate_output_dir(dir);
    stopped += v.stopped_runs;
    if (!v.ok()) return {false, dir.filename().string() + ": " + v.failures.front()};
  }
  return {stopped > 0, std::to_string(stopped) + " stopped runs in " + std::to_string(g_run_dirs.size()) +
                           " output directories re-validated from CSV"};
}

}  // namespace

int main(int argc, char** argv) {
  g_out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::remove_all(g_out);
  fs::create_directories(g_out);

  struct Criterion {
    const char* id;
    const char* title;
    Outcome (*run)();
    double limit_s;  // 0: no runtime limit
  };
  const std::vector<Criterion> criteria{
      {"AC-01", "filter identity", ac01_filter_identity, 1},
      {"AC-02", "assumption suite", ac02_assumption_suite, 5},
      {"AC-03", "oracle equivalence", ac03_oracle_equivalence, 10},
      {"AC-04", "interpolation inequality", ac04_interpolation, 5},
      {"AC-05", "commutator scaling", ac05_commutators, 30},
      {"AC-07", "Holder rates", ac07_holder_rates, 60},
      {"AC-08", "logarithmic rate shape", ac08_log_rate, 60},
      {"AC-09", "elliptic end-to-end", ac09_elliptic, 120},
      {"AC-10", "stability diagnostic", ac10_stability, 60},
      {"AC-11", "elliptic derivative", ac11_elliptic_derivative, 5},
      {"AC-12", "literal Lardy negative control", ac12_literal_lardy, 1},
      {"AC-06", "discrepancy postcondition", ac06_postcondition, 0},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_s == 0 || secs < c.limit_s;
    const bool pass = o.ok && in_time;
    failures += pass ? 0 : 1;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.id << ' ' << c.title << ": " << o.detail << " ("
              << fmt("%.2f", secs) << " s" << (c.limit_s > 0 ? ", limit " + fmt("%g", c.limit_s) + " s" : "")
              << (in_time ? "" : ", too slow") << ")" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
