#include "regnewt/experiment/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace ex = regnewt::experiment;

int main(int argc, char** argv) {
  CLI::App app{"Regularized Newton iterations for nonlinear ill-posed problems"};
  app.require_subcommand(1);

  std::string config_path;
  ex::CommandOptions options;
  std::string out;
  std::int64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out, "output directory (overrides the config)");
    sub->add_option("--workers", options.workers, "concurrent cells, 0 = hardware threads")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed-override", seed, "run with this single seed");
    sub->add_flag("--literal-lardy", options.literal_lardy, "use the literal Lardy summation (diagnostic)");
  };
  CLI::App* run = app.add_subcommand("run", "one discrepancy run per (delta, seed)");
  CLI::App* rate = app.add_subcommand("rate-study", "convergence rate fit over the noise levels");
  CLI::App* verify = app.add_subcommand("verify", "numerical checks of the filter and problem assumptions");
  for (CLI::App* sub : {run, rate, verify}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ex::kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  if (!out.empty()) options.out = out;
  if (active->count("--seed-override") > 0) options.seed_override = seed;

  try {
    if (active == run) return ex::cmd_run(config_path, options, std::cout, std::cerr);
    if (active == rate) return ex::cmd_rate_study(config_path, options, std::cout, std::cerr);
    return ex::cmd_verify(config_path, options, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ex::kExitFailure;
  }
}
