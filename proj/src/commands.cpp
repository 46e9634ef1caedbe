#include "stefan/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <thread>

#include "stefan/diagnostics.hpp"
#include "stefan/reconstruct.hpp"

namespace stefan::cli {

namespace {

using similarity::SimilaritySolution;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_csv(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  out << std::setprecision(17);
  return out;
}

std::string csv_safe(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

std::string equation_name(const Problem& problem) {
  if (std::holds_alternative<FluxFeedbackSource>(problem.source)) return "flux-feedback lambda-equation";
  if (std::holds_alternative<ExponentialSource>(problem.source)) return "exponential-source lambda-equation";
  if (std::holds_alternative<NoSource>(problem.source)) return "source-free lambda-equation";
  return "similarity-source lambda-equation";
}

SourceSpec sweep_source(const SourceSpec& base) {
  if (std::holds_alternative<FluxFeedbackSource>(base)) return FluxFeedbackSource{};
  return base;
}

template <class Fn>
CheckResult check(const std::string& name, double threshold, Fn&& measure) {
  CheckResult r{name, kNaN, threshold, false, ""};
  try {
    r.value = measure();
    r.pass = std::isfinite(r.value) && r.value <= threshold;
  } catch (const std::exception& ex) {
    r.note = ex.what();
  }
  return r;
}

CheckResult flag(const std::string& name, bool ok, const std::string& note = {}) {
  return {name, ok ? 0.0 : 1.0, 0.0, ok, note};
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

VerifyReport run_verification(const RunConfig& cfg) {
  VerifyReport report;
  auto& checks = report.checks;
  std::optional<SimilaritySolution> sol;
  try {
    const double root = SimilaritySolution::solve(cfg.problem, cfg.solve).lambda();
    sol = SimilaritySolution::assemble(cfg.problem, root + cfg.verify_lambda_offset, cfg.solve);
  } catch (const std::exception& ex) {
    checks.push_back({"solve", kNaN, 0.0, false, ex.what()});
    return report;
  }
  const SimilaritySolution& s = *sol;

  checks.push_back(check("lambda_residual", 1e-8, [&] { return std::abs(s.lambda_residual()); }));
  checks.push_back(check("boundary_y0", 1e-10, [&] { return std::abs(s.y(0.0) - 1.0); }));
  checks.push_back(check("boundary_ylambda", 1e-8, [&] { return std::abs(s.y(s.lambda())); }));
  checks.push_back(check("stefan_condition_rel", 1e-4, [&] {
    const double expected = -2.0 * s.lambda() / s.ste();
    return std::abs(diagnostics::front_slope(s) - expected) / std::abs(expected);
  }));
  checks.push_back(check("surface_slope_rel", 1e-6, [&] {
    return std::abs(diagnostics::surface_slope(s) - s.y_prime0()) / std::abs(s.y_prime0());
  }));
  checks.push_back(check("ode_residual", 1e-4, [&] { return diagnostics::ode_residual_max(s, 200); }));
  try {
    const auto shape = diagnostics::profile_shape(s, 200);
    checks.push_back(flag("profile_in_unit_range", shape.in_unit_range));
    checks.push_back(flag("profile_strictly_decreasing", shape.strictly_decreasing));
    checks.push_back(flag("psi_strictly_decreasing", shape.psi_decreasing));
  } catch (const std::exception& ex) {
    checks.push_back(flag("profile_shape", false, ex.what()));
  }
  if (std::holds_alternative<ExponentialSource>(cfg.problem.source)) {
    checks.push_back(check("closed_form_vs_quadrature", 1e-9, [&] {
      similarity::SolveOptions quad = cfg.solve;
      quad.exponential_closed_form = false;
      const double a = SimilaritySolution::solve(cfg.problem, cfg.solve).lambda();
      const double b = SimilaritySolution::solve(cfg.problem, quad).lambda();
      return std::abs(a - b);
    }));
  }
  if (cfg.verify_oracle) {
    try {
      report.run = oracle::run_oracle(s, cfg.oracle);
      checks.push_back({"oracle_front_rel_err", report.run->front_rel_err, 0.01,
                        report.run->front_rel_err <= 0.01, ""});
      const double band = 0.01 * cfg.problem.boundary.span();
      checks.push_back({"oracle_temp_max_err", report.run->temp_max_err, band,
                        report.run->temp_max_err <= band, ""});
    } catch (const std::exception& ex) {
      checks.push_back({"oracle", kNaN, 0.0, false, ex.what()});
    }
  }
  return report;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, int workers) {
  const Dimensionless base = cfg.problem.dimensionless();
  const auto axis = [](std::vector<double> values, double fallback) {
    if (values.empty()) return std::vector<double>{fallback};
    std::sort(values.begin(), values.end());
    return values;
  };
  const bool feedback = std::holds_alternative<FluxFeedbackSource>(cfg.problem.source);
  const auto ste = axis(cfg.sweep.ste, base.ste);
  const auto delta = axis(cfg.sweep.delta, cfg.problem.material.delta);
  const auto p = axis(cfg.sweep.p, cfg.problem.material.p);
  const auto A = feedback ? axis(cfg.sweep.A, *base.A) : std::vector<double>{kNaN};

  std::vector<SweepRow> rows;
  for (double s : ste)
    for (double d : delta)
      for (double q : p)
        for (double a : A) {
          SweepRow row{s, d, q, feedback ? std::optional<double>(a) : std::nullopt};
          rows.push_back(row);
        }

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      try {
        const Problem prob =
            Problem::from_dimensionless(row.ste, row.delta, row.p, sweep_source(cfg.problem.source), row.A);
        const auto sol = SimilaritySolution::solve(prob, cfg.solve);
        row.lambda = sol.lambda();
        row.y_prime0 = sol.y_prime0();
        row.residual = sol.lambda_residual();
      } catch (const std::exception& ex) {
        row.lambda = row.y_prime0 = row.residual = kNaN;
        row.status = csv_safe(ex.what());
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err) {
  std::optional<SimilaritySolution> sol;
  try {
    sol = SimilaritySolution::solve(cfg.problem, cfg.solve);
  } catch (const Error& ex) {
    err << "solver failure in the " << equation_name(cfg.problem) << ": " << ex.what() << "\n";
    return kSolverError;
  }
  const auto& s = *sol;
  auto csv = open_csv(out_dir, "summary.csv");
  const auto row = [&](const std::string& key, const auto& value) {
    csv << key << ',' << value << '\n';
    out << std::setprecision(17) << key << " = " << value << '\n';
  };
  csv << "quantity,value\n";
  row("source", source_name(cfg.problem.source));
  row("ste", s.ste());
  row("delta", s.delta());
  row("p", s.p());
  if (s.dimensionless().A) row("A", *s.dimensionless().A);
  row("a", s.dimensionless().a);
  row("lambda", s.lambda());
  row("y_prime0", s.y_prime0());
  row("lambda_residual", s.lambda_residual());
  try {
    row("y0_error", std::abs(s.y(0.0) - 1.0));
    row("ylambda_error", std::abs(s.y(s.lambda())));
    row("stefan_condition_rel", std::abs(diagnostics::front_slope(s) + 2.0 * s.lambda() / s.ste()) /
                                    (2.0 * s.lambda() / s.ste()));
  } catch (const Error& ex) {
    err << "solver failure while evaluating the profile: " << ex.what() << "\n";
    return kSolverError;
  }
  return kSuccess;
}

int cmd_profile(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const auto sol = SimilaritySolution::solve(cfg.problem, cfg.solve);
    const auto mode =
        cfg.profile_exact ? reconstruct::ProfileEvaluation::Exact : reconstruct::ProfileEvaluation::Interpolated;
    const auto& bd = cfg.problem.boundary;
    auto csv = open_csv(out_dir, "profile.csv");
    csv << "t,x,eta,y,theta\n";
    for (double t : cfg.profile_times) {
      const double s = reconstruct::front_position(sol, t);
      for (int i = 0; i < cfg.profile_points; ++i) {
        const double x = (i + 1 == cfg.profile_points) ? s : s * i / (cfg.profile_points - 1);
        const double eta = reconstruct::similarity_variable(sol, {x, t});
        const double theta = reconstruct::temperature(sol, {x, t}, mode);
        csv << t << ',' << x << ',' << eta << ',' << (theta - bd.theta_f) / bd.span() << ',' << theta << '\n';
      }
    }
    out << "wrote " << (out_dir / "profile.csv").string() << " (" << cfg.profile_times.size() << " times x "
        << cfg.profile_points << " points)\n";
  } catch (const Error& ex) {
    err << "solver failure in the " << equation_name(cfg.problem) << ": " << ex.what() << "\n";
    return kSolverError;
  }
  return kSuccess;
}

int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out, std::ostream&) {
  const VerifyReport report = run_verification(cfg);
  auto csv = open_csv(out_dir, "verify.csv");
  csv << "check,value,threshold,status,note\n";
  for (const auto& c : report.checks) {
    csv << c.name << ',' << c.value << ',' << c.threshold << ',' << (c.pass ? "pass" : "fail") << ','
        << csv_safe(c.note) << '\n';
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << c.value << " threshold=" << c.threshold;
    if (!c.note.empty()) out << " (" << c.note << ")";
    out << '\n';
  }
  if (report.run) {
    auto front = open_csv(out_dir, "oracle_front.csv");
    front << "t,s_num\n";
    for (Eigen::Index i = 0; i < report.run->times.size(); ++i) {
      front << report.run->times[i] << ',' << report.run->front[i] << '\n';
    }
  }
  return report.all_pass() ? kSuccess : kVerificationFailed;
}

int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err) {
  const auto rows = run_sweep(cfg, cfg.workers);
  auto csv = open_csv(out_dir, "sweep.csv");
  csv << "ste,delta,p,A,lambda,y_prime0,residual,status\n";
  std::size_t failures = 0;
  for (const auto& r : rows) {
    csv << r.ste << ',' << r.delta << ',' << r.p << ',';
    if (r.A) csv << *r.A;
    csv << ',' << r.lambda << ',' << r.y_prime0 << ',' << r.residual << ',' << r.status << '\n';
    if (r.status != "ok") ++failures;
  }
  out << "wrote " << rows.size() << " rows to " << (out_dir / "sweep.csv").string() << " (" << failures
      << " failed)\n";
  if (failures == rows.size()) {
    err << "every sweep tuple failed\n";
    return kSolverError;
  }
  return kSuccess;
}

int run_command(const std::string& command, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(options.config);
    if (options.times) {
      if (options.times->empty()) throw ConfigError("--t needs at least one time");
      for (double t : *options.times) {
        if (!(t > 0.0)) throw ConfigError("--t entries must be > 0");
      }
      cfg.profile_times = *options.times;
    }
    if (options.points) {
      if (*options.points < 2) throw ConfigError("--points must be >= 2");
      cfg.profile_points = *options.points;
    }
    if (options.workers) {
      if (*options.workers < 1) throw ConfigError("--workers must be >= 1");
      cfg.workers = *options.workers;
    }
    if (command == "sweep" && cfg.sweep.empty()) throw ConfigError("sweep needs at least one sweep.* list");
  } catch (const std::exception& ex) {
    err << "config error: " << ex.what() << "\n";
    return kConfigError;
  }
  if (command == "solve") return cmd_solve(cfg, options.out_dir, out, err);
  if (command == "profile") return cmd_profile(cfg, options.out_dir, out, err);
  if (command == "verify") return cmd_verify(cfg, options.out_dir, out, err);
  if (command == "sweep") return cmd_sweep(cfg, options.out_dir, out, err);
  err << "unknown command '" << command << "'\n";
  return kConfigError;
}

}  // namespace stefan::cli
