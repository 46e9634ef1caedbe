#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "stefan/commands.hpp"

namespace fs = std::filesystem;
using namespace stefan;
using namespace stefan::cli;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("stefan_cli_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path file = dir / name;
  std::ofstream(file) << text;
  return file;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& file) {
  std::ifstream in(file);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& cmd, const fs::path& cfg, const fs::path& out, CommandOptions opts = {}) {
  opts.config = cfg;
  opts.out_dir = out;
  std::ostringstream o, e;
  return run_command(cmd, opts, o, e);
}

const std::string kExponential =
    "dimensionless.ste = 1\ndimensionless.delta = 1\ndimensionless.p = 1\nsource.kind = exponential\n"
    "oracle.n_space = 64\noracle.n_time = 512\n";

const std::string kDimensional =
    "material.rho = 790\nmaterial.c0 = 2890\nmaterial.k0 = 0.21\nmaterial.latent_heat = 244000\n"
    "material.delta = 0.5\nmaterial.p = 2\nboundary.theta0 = 350\nboundary.theta_f = 320\n"
    "source.kind = flux_feedback\nsource.lambda0 = 0.05\n";

}  // namespace

TEST_CASE("config parser accepts both modes") {
  std::istringstream a(kExponential);
  const RunConfig ca = parse_config(a);
  CHECK(ca.dimensionless_mode);
  CHECK(ca.problem.dimensionless().ste == 1.0);
  CHECK(ca.oracle.n_space == 64);
  std::istringstream b("# comment\n" + kDimensional + "profile.t = 1, 2.5\n");
  const RunConfig cb = parse_config(b);
  CHECK_FALSE(cb.dimensionless_mode);
  CHECK(cb.problem.material.rho == 790.0);
  CHECK(cb.profile_times == std::vector<double>{1.0, 2.5});
  CHECK(parse_list("0.5, 1,2") == std::vector<double>{0.5, 1.0, 2.0});
}

TEST_CASE("config errors") {
  const auto bad = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_config(in), ConfigError);
  };
  bad(kExponential + "material.colour = 3\n");
  bad(kExponential + "dimensionless.ste = 2\n");
  bad(kExponential + "material.rho = 2\n");
  bad("dimensionless.delta = 1\ndimensionless.p = 1\nsource.kind = none\n");
  bad("dimensionless.ste = 1\ndimensionless.delta = 1\ndimensionless.p = 1\nsource.kind = lava\n");
  bad("dimensionless.ste = abc\ndimensionless.delta = 1\ndimensionless.p = 1\nsource.kind = none\n");
  bad("no equals sign here\n");
  std::string swapped = kDimensional;
  swapped.replace(swapped.find("theta0 = 350"), 12, "theta0 = 300");
  bad(swapped);
  std::string zero = kDimensional;
  zero.replace(zero.find("lambda0 = 0.05"), 14, "lambda0 = 0");
  bad(zero);
  bad("dimensionless.ste = 1\ndimensionless.delta = 1\ndimensionless.p = 1\ndimensionless.A = 0\n"
      "source.kind = flux_feedback\n");
}

TEST_CASE("run_command exit codes") {
  TempDir dir("codes");
  CHECK(run("solve", dir.path / "missing.cfg", dir.path) == kConfigError);
  CHECK(run("solve", write_config(dir.path, "u.cfg", kExponential + "bogus.key = 1\n"), dir.path) == kConfigError);
  const fs::path good = write_config(dir.path, "e.cfg", kExponential);
  CHECK(run("solve", good, dir.path) == kSuccess);
  CHECK(run("launch", good, dir.path) == kConfigError);
  CHECK(run("sweep", good, dir.path) == kConfigError);
  CommandOptions opts;
  opts.points = 1;
  CHECK(run("profile", good, dir.path, opts) == kConfigError);
  opts = {};
  opts.times = std::vector<double>{-1.0};
  CHECK(run("profile", good, dir.path, opts) == kConfigError);
  // Root far below the seed bracket, out of reach of the lower-end halving.
  const fs::path huge = write_config(dir.path, "h.cfg",
                                     "dimensionless.ste = 1e-300\ndimensionless.delta = 1\ndimensionless.p = 1\n"
                                     "source.kind = none\n");
  CHECK(run("solve", huge, dir.path) == kSolverError);
}

TEST_CASE("solve writes the summary") {
  TempDir dir("solve");
  REQUIRE(run("solve", write_config(dir.path, "e.cfg", kExponential), dir.path) == kSuccess);
  std::map<std::string, std::string> kv;
  for (const auto& r : read_csv(dir.path / "summary.csv")) kv[r.at(0)] = r.at(1);
  CHECK(kv["source"] == "exponential");
  CHECK(std::abs(std::stod(kv["lambda"]) - 0.64578036122176219) <= 1e-9);
  CHECK(std::abs(std::stod(kv["lambda_residual"])) <= 1e-8);
}

TEST_CASE("profile rows honour the boundary conditions") {
  TempDir dir("profile");
  CommandOptions opts;
  opts.times = std::vector<double>{60.0, 600.0};
  opts.points = 11;
  REQUIRE(run("profile", write_config(dir.path, "d.cfg", kDimensional), dir.path, opts) == kSuccess);
  const auto rows = read_csv(dir.path / "profile.csv");
  REQUIRE(rows.size() == 1 + 2 * 11);
  CHECK(rows[0] == std::vector<std::string>{"t", "x", "eta", "y", "theta"});
  for (int block = 0; block < 2; ++block) {
    const auto& first = rows[1 + 11 * block];
    const auto& last = rows[11 * (block + 1)];
    CHECK(std::stod(first[1]) == 0.0);
    CHECK(std::stod(first[4]) == doctest::Approx(350.0).epsilon(1e-12));
    CHECK(std::abs(std::stod(last[4]) - 320.0) <= 1e-6);
    CHECK(std::abs(std::stod(last[3])) <= 1e-8);
  }
  // eta column is x / (2 a sqrt(t)), identical at the front for every t.
  CHECK(std::stod(rows[11][2]) == doctest::Approx(std::stod(rows[22][2])).epsilon(1e-12));
  // 17 significant digits.
  CHECK((rows[5][1].find('e') != std::string::npos || rows[5][1].size() >= 15));
}

TEST_CASE("verify passes and fails as it should") {
  TempDir dir("verify");
  CHECK(run("verify", write_config(dir.path, "e.cfg", kExponential), dir.path) == kSuccess);
  const auto rows = read_csv(dir.path / "verify.csv");
  REQUIRE(rows.size() > 5);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][3] == "pass");
  CHECK(fs::exists(dir.path / "oracle_front.csv"));
  CHECK(run("verify", write_config(dir.path, "off.cfg", kExponential + "verify.lambda_offset = 0.1\n"),
            dir.path) == kVerificationFailed);
}

TEST_CASE("sweep ordering, monotonicity and consistency with solve") {
  TempDir dir("sweep");
  const std::string base = "dimensionless.ste = 1\ndimensionless.delta = 1\ndimensionless.p = 1\nsource.kind = exponential\n";
  const fs::path cfg = write_config(dir.path, "s.cfg", base + "sweep.ste = 2, 0.5, 1\nsweep.delta = 0.1, 1, 10\n");
  CommandOptions opts;
  opts.workers = 3;
  REQUIRE(run("sweep", cfg, dir.path, opts) == kSuccess);
  const auto rows = read_csv(dir.path / "sweep.csv");
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == std::vector<std::string>{"ste", "delta", "p", "A", "lambda", "y_prime0", "residual", "status"});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][7] == "ok");
  for (int d = 0; d < 3; ++d) {
    CHECK(std::stod(rows[1 + d][0]) == 0.5);
    // lambda increases with Ste at fixed delta, and with delta at fixed Ste.
    CHECK(std::stod(rows[4 + d][4]) > std::stod(rows[1 + d][4]));
    CHECK(std::stod(rows[7 + d][4]) > std::stod(rows[4 + d][4]));
  }
  for (int s = 0; s < 3; ++s) {
    CHECK(std::stod(rows[2 + 3 * s][4]) > std::stod(rows[1 + 3 * s][4]));
    CHECK(std::stod(rows[3 + 3 * s][4]) > std::stod(rows[2 + 3 * s][4]));
  }

  // Same sweep with one worker is byte-identical.
  TempDir serial("sweep_serial");
  opts.workers = 1;
  REQUIRE(run("sweep", cfg, serial.path, opts) == kSuccess);
  CHECK(slurp(serial.path / "sweep.csv") == slurp(dir.path / "sweep.csv"));

  // A single-tuple sweep reproduces solve bit for bit.
  TempDir one("sweep_one");
  const std::string fb = "dimensionless.ste = 1.5\ndimensionless.delta = 0.3\ndimensionless.p = 2\n"
                         "dimensionless.A = 0.7\nsource.kind = flux_feedback\n";
  REQUIRE(run("sweep", write_config(one.path, "o.cfg", fb + "sweep.ste = 1.5\n"), one.path) == kSuccess);
  REQUIRE(run("solve", write_config(one.path, "p.cfg", fb), one.path) == kSuccess);
  const auto sweep = read_csv(one.path / "sweep.csv");
  std::map<std::string, std::string> kv;
  for (const auto& r : read_csv(one.path / "summary.csv")) kv[r.at(0)] = r.at(1);
  REQUIRE(sweep.size() == 2);
  CHECK(sweep[1][3] == kv["A"]);
  CHECK(sweep[1][4] == kv["lambda"]);
  CHECK(sweep[1][5] == kv["y_prime0"]);
}

TEST_CASE("sweep records failing tuples without aborting") {
  TempDir dir("sweep_fail");
  const fs::path cfg = write_config(dir.path, "f.cfg",
                                    "dimensionless.ste = 1\ndimensionless.delta = 1\ndimensionless.p = 1\n"
                                    "source.kind = none\nsweep.ste = 1e-300, 1\n");
  REQUIRE(run("sweep", cfg, dir.path) == kSuccess);
  const auto rows = read_csv(dir.path / "sweep.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][7] != "ok");
  CHECK(rows[2][7] == "ok");
}

#ifdef STEFAN_CLI_PATH
TEST_CASE("binary entry point") {
  TempDir dir("binary");
  const fs::path cfg = write_config(dir.path, "e.cfg", kExponential);
  const std::string exe = STEFAN_CLI_PATH;
  const auto sh = [&](const std::string& args) {
    const int status = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  CHECK(sh("solve --config " + cfg.string() + " --out " + dir.path.string()) == 0);
  CHECK(fs::exists(dir.path / "summary.csv"));
  CHECK(sh("profile --config " + cfg.string() + " --out " + dir.path.string() + " --t 0.5,1 --points 5") == 0);
  CHECK(read_csv(dir.path / "profile.csv").size() == 11);
  CHECK(sh("solve") == 2);
  CHECK(sh("explode --config " + cfg.string()) == 2);
  CHECK(sh("solve --config " + (dir.path / "nope.cfg").string()) == 2);
}
#endif
