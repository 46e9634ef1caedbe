#include "stefan/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace stefan::cli {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "material.rho",       "material.c0",        "material.k0",       "material.latent_heat",
      "material.delta",     "material.p",         "boundary.theta0",   "boundary.theta_f",
      "source.kind",        "source.lambda0",     "dimensionless.ste", "dimensionless.delta",
      "dimensionless.p",    "dimensionless.A",    "solver.abs_tol",    "solver.rel_tol",
      "solver.max_iter",    "solver.table_size",  "oracle.n_space",    "oracle.n_time",
      "oracle.t_start",     "oracle.t_end",       "oracle.theta_scheme", "profile.t",
      "profile.points",     "profile.exact",      "sweep.ste",         "sweep.delta",
      "sweep.p",            "sweep.A",            "sweep.workers",     "verify.oracle",
      "verify.lambda_offset",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a number");
  }
  if (trim(text.substr(used)) != "") throw ConfigError("key '" + key + "': trailing characters in '" + text + "'");
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v != static_cast<double>(static_cast<int>(v))) throw ConfigError("key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("key '" + key + "' must be true or false");
}

class Entries {
 public:
  explicit Entries(std::map<std::string, std::string> map) : map_(std::move(map)) {}

  bool has(const std::string& key) const { return map_.count(key) > 0; }
  bool has_prefix(const std::string& prefix) const {
    return std::any_of(map_.begin(), map_.end(), [&](const auto& kv) { return kv.first.rfind(prefix, 0) == 0; });
  }
  const std::string& raw(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
  }
  double number(const std::string& key) const { return parse_number(key, raw(key)); }
  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
  int int_or(const std::string& key, int fallback) const { return has(key) ? parse_int(key, raw(key)) : fallback; }
  bool bool_or(const std::string& key, bool fallback) const { return has(key) ? parse_bool(key, raw(key)) : fallback; }
  std::vector<double> list_or_empty(const std::string& key) const {
    if (!has(key)) return {};
    auto values = parse_list(raw(key));
    if (values.empty()) throw ConfigError("key '" + key + "' needs at least one value");
    return values;
  }

 private:
  std::map<std::string, std::string> map_;
};

void forbid(const Entries& e, const std::string& key, const std::string& why) {
  if (e.has(key)) throw ConfigError("key '" + key + "' not allowed: " + why);
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty entry in list '" + text + "'");
    out.push_back(parse_number("list", item));
  }
  return out;
}

RunConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> map;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    if (!map.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
  }
  const Entries e(std::move(map));

  RunConfig cfg;
  const std::string kind = e.raw("source.kind");
  if (kind != "none" && kind != "exponential" && kind != "flux_feedback") {
    throw ConfigError("source.kind must be one of none, exponential, flux_feedback (got '" + kind + "')");
  }
  const bool feedback = kind == "flux_feedback";
  SourceSpec source = NoSource{};
  if (kind == "exponential") source = ExponentialSource{};

  cfg.dimensionless_mode = e.has_prefix("dimensionless.");
  try {
    if (cfg.dimensionless_mode) {
      for (const char* key : {"material.rho", "material.c0", "material.k0", "material.latent_heat",
                              "material.delta", "material.p", "boundary.theta0", "boundary.theta_f"}) {
        forbid(e, key, "dimensionless mode takes dimensionless.* parameters");
      }
      forbid(e, "source.lambda0", "dimensionless mode takes dimensionless.A");
      if (!feedback) forbid(e, "dimensionless.A", "A only applies to source.kind = flux_feedback");
      std::optional<double> A;
      if (feedback) {
        A = e.number("dimensionless.A");
        if (!(*A > 0.0)) throw ConfigError("dimensionless.A must be > 0 (A > 0 required)");
        source = FluxFeedbackSource{};
      }
      const double ste = e.number("dimensionless.ste");
      if (!(ste > 0.0)) throw ConfigError("dimensionless.ste must be > 0");
      cfg.problem = Problem::from_dimensionless(ste, e.number("dimensionless.delta"), e.number("dimensionless.p"),
                                                source, A);
    } else {
      cfg.problem.material = Material{e.number("material.rho"),         e.number("material.c0"),
                                      e.number("material.k0"),          e.number("material.latent_heat"),
                                      e.number("material.delta"),       e.number("material.p")};
      cfg.problem.boundary = BoundaryData{e.number("boundary.theta0"), e.number("boundary.theta_f")};
      if (feedback) {
        const double lambda0 = e.number("source.lambda0");
        if (!(lambda0 > 0.0)) throw ConfigError("source.lambda0 must be > 0 (lambda0 > 0 required)");
        source = FluxFeedbackSource{lambda0};
      } else {
        forbid(e, "source.lambda0", "lambda0 only applies to source.kind = flux_feedback");
      }
      cfg.problem.source = source;
      cfg.problem.validate();
    }
  } catch (const Error& err) {
    throw ConfigError(err.what());
  }

  cfg.solve.root.abs_tol = e.number_or("solver.abs_tol", cfg.solve.root.abs_tol);
  cfg.solve.root.rel_tol = e.number_or("solver.rel_tol", cfg.solve.root.rel_tol);
  cfg.solve.root.max_iter = e.int_or("solver.max_iter", cfg.solve.root.max_iter);
  cfg.solve.table_size = e.int_or("solver.table_size", cfg.solve.table_size);
  cfg.oracle.n_space = e.int_or("oracle.n_space", cfg.oracle.n_space);
  cfg.oracle.n_time = e.int_or("oracle.n_time", cfg.oracle.n_time);
  cfg.oracle.t_start = e.number_or("oracle.t_start", cfg.oracle.t_start);
  cfg.oracle.t_end = e.number_or("oracle.t_end", cfg.oracle.t_end);
  cfg.oracle.theta_scheme = e.number_or("oracle.theta_scheme", cfg.oracle.theta_scheme);
  if (e.has("profile.t")) cfg.profile_times = e.list_or_empty("profile.t");
  cfg.profile_points = e.int_or("profile.points", cfg.profile_points);
  cfg.profile_exact = e.bool_or("profile.exact", cfg.profile_exact);
  cfg.sweep.ste = e.list_or_empty("sweep.ste");
  cfg.sweep.delta = e.list_or_empty("sweep.delta");
  cfg.sweep.p = e.list_or_empty("sweep.p");
  cfg.sweep.A = e.list_or_empty("sweep.A");
  if (!cfg.sweep.A.empty() && !feedback) throw ConfigError("sweep.A requires source.kind = flux_feedback");
  cfg.workers = e.int_or("sweep.workers", cfg.workers);
  cfg.verify_oracle = e.bool_or("verify.oracle", cfg.verify_oracle);
  cfg.verify_lambda_offset = e.number_or("verify.lambda_offset", cfg.verify_lambda_offset);

  try {
    cfg.solve.root.validate();
    cfg.oracle.validate();
  } catch (const Error& err) {
    throw ConfigError(err.what());
  }
  if (cfg.solve.table_size < 2) throw ConfigError("solver.table_size must be >= 2");
  if (cfg.profile_points < 2) throw ConfigError("profile.points must be >= 2");
  if (cfg.workers < 1) throw ConfigError("sweep.workers must be >= 1");
  for (double t : cfg.profile_times) {
    if (!(t > 0.0)) throw ConfigError("profile.t entries must be > 0");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace stefan::cli
