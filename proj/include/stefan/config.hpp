#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "stefan/model.hpp"
#include "stefan/oracle.hpp"
#include "stefan/similarity.hpp"

namespace stefan::cli {

/// Raised for malformed or invalid configuration files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepRanges {
  std::vector<double> ste;
  std::vector<double> delta;
  std::vector<double> p;
  std::vector<double> A;

  bool empty() const { return ste.empty() && delta.empty() && p.empty() && A.empty(); }
};

struct RunConfig {
  Problem problem;
  bool dimensionless_mode = false;
  similarity::SolveOptions solve;
  oracle::OracleConfig oracle{128, 0.01, 1.0, 1024};
  std::vector<double> profile_times{1.0};
  int profile_points = 101;
  bool profile_exact = false;
  SweepRanges sweep;
  int workers = 1;
  bool verify_oracle = true;
  double verify_lambda_offset = 0.0;
};

/// Parses the flat `section.key = value` format. Lines starting with '#' are
/// comments; lists are comma separated. Unknown or duplicated keys, missing
/// physical parameters and violated invariants raise ConfigError.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

std::vector<double> parse_list(const std::string& text);

}  // namespace stefan::cli
