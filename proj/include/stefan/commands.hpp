#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stefan/config.hpp"

namespace stefan::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kSolverError = 3,
  kVerificationFailed = 4,
};

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";
  std::optional<std::vector<double>> times;  // --t
  std::optional<int> points;                 // --points
  std::optional<int> workers;                // --workers
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::optional<oracle::OracleRun> run;

  bool all_pass() const;
};

/// Every verification check for the configured problem. Solver-side failures
/// become failed checks instead of exceptions.
VerifyReport run_verification(const RunConfig& cfg);

struct SweepRow {
  double ste = 0.0;
  double delta = 0.0;
  double p = 0.0;
  std::optional<double> A;
  double lambda = 0.0;
  double y_prime0 = 0.0;
  double residual = 0.0;
  std::string status = "ok";
};

/// Parameter tuples in lexicographic (Ste, delta, p, A) order, each solved independently.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, int workers);

int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);
int cmd_profile(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

/// Loads the config, applies flag overrides and dispatches to a subcommand.
int run_command(const std::string& command, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace stefan::cli
