#include <CLI11.hpp>

#include <iostream>

#include "stefan/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Similarity solutions of the one-phase Stefan problem with temperature-dependent coefficients"};
  app.require_subcommand(1);

  stefan::cli::CommandOptions options;
  std::string config;
  std::string times;
  int points = 0;
  int workers = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Problem description (key = value file)")->required();
    sub->add_option("--out", options.out_dir, "Output directory for CSV files");
  };
  auto* solve = app.add_subcommand("solve", "Solve for lambda and write summary.csv");
  auto* profile = app.add_subcommand("profile", "Write temperature profiles to profile.csv");
  auto* verify = app.add_subcommand("verify", "Run every verification check, write verify.csv");
  auto* sweep = app.add_subcommand("sweep", "Solve over sweep.* parameter lists, write sweep.csv");
  for (auto* sub : {solve, profile, verify, sweep}) add_common(sub);
  profile->add_option("--t", times, "Comma-separated list of times");
  profile->add_option("--points", points, "Points per time on [0, s(t)]");
  sweep->add_option("--workers", workers, "Concurrent sweep workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : stefan::cli::kConfigError;
  }

  options.config = config;
  try {
    if (!times.empty()) options.times = stefan::cli::parse_list(times);
  } catch (const std::exception& e) {
    std::cerr << "config error: --t: " << e.what() << "\n";
    return stefan::cli::kConfigError;
  }
  if (profile->count("--points")) options.points = points;
  if (sweep->count("--workers")) options.workers = workers;

  const std::string command = app.get_subcommands().front()->get_name();
  return stefan::cli::run_command(command, options, std::cout, std::cerr);
}
