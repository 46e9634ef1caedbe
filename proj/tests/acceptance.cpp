// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "stefan/diagnostics.hpp"
#include "stefan/errata.hpp"
#include "stefan/oracle.hpp"
#include "stefan/similarity.hpp"

using namespace stefan;
using similarity::SimilaritySolution;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs > limit_s) {
    out.pass = false;
    out.detail += " [runtime over " + std::to_string(limit_s) + " s]";
  }
  std::printf("%s criterion %d: %s (%.2f s) %s\n", out.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              out.detail.c_str());
  std::fflush(stdout);
  if (!out.pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const std::vector<double> kSte{0.1, 0.5, 1.0, 2.0, 5.0};
const std::vector<double> kDelta{0.1, 1.0, 5.0};
const std::vector<double> kP{0.5, 1.0, 2.0, 3.0};
const std::vector<double> kA{0.5, 1.0, 2.0};

// source index 0 = exponential, 1..3 = flux feedback with kA[i-1]
using Key = std::tuple<int, double, double, double>;  // source, delta, p, ste

std::map<Key, SimilaritySolution> solve_grid() {
  std::map<Key, SimilaritySolution> grid;
  for (int src = 0; src < 4; ++src) {
    for (double delta : kDelta) {
      for (double p : kP) {
        for (double ste : kSte) {
          const Problem prob = src == 0 ? Problem::from_dimensionless(ste, delta, p, ExponentialSource{})
                                        : Problem::from_dimensionless(ste, delta, p, FluxFeedbackSource{}, kA[src - 1]);
          grid.emplace(Key{src, delta, p, ste}, SimilaritySolution::solve(prob));
        }
      }
    }
  }
  return grid;
}

std::string case_name(const Key& k) {
  const auto& [src, delta, p, ste] = k;
  char buf[128];
  if (src == 0) {
    std::snprintf(buf, sizeof buf, "exp Ste=%g delta=%g p=%g", ste, delta, p);
  } else {
    std::snprintf(buf, sizeof buf, "A=%g Ste=%g delta=%g p=%g", kA[src - 1], ste, delta, p);
  }
  return buf;
}

}  // namespace

int main() {
  std::optional<std::map<Key, SimilaritySolution>> grid;

  report(1, "classical Neumann reduction", 1.0, [] {
    const double lam = similarity::solve_lambda_source1(1.0, 1e-12, 1.0, [](double) { return 0.0; });
    const double ref = oracles::neumann_lambda(1.0);
    const auto sol = SimilaritySolution::solve(Problem::from_dimensionless(1.0, 1e-12, 1.0, NoSource{}));
    double prof = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double eta = sol.lambda() * i / 99.0;
      prof = std::max(prof, std::abs(sol.y(eta) - (1.0 - std::erf(eta) / std::erf(sol.lambda()))));
    }
    const bool ok = std::abs(lam - 0.620063) <= 1e-4 && std::abs(lam - ref) <= 1e-4 && prof <= 1e-6;
    return Outcome{ok, "lambda=" + fmt("%.12f", lam) + " oracle=" + fmt("%.12f", ref) +
                           " profile_err=" + fmt("%.2e", prof)};
  });

  report(2, "root residuals, boundary values, Stefan slope on 240 cases", 30.0, [&] {
    grid = solve_grid();
    double worst_res = 0.0, worst_y0 = 0.0, worst_yl = 0.0, worst_slope = 0.0;
    std::string bad;
    for (const auto& [key, sol] : *grid) {
      const double res = std::abs(sol.lambda_residual());
      const double y0 = std::abs(sol.y(0.0) - 1.0);
      const double yl = std::abs(sol.y(sol.lambda()));
      const double expected = -2.0 * sol.lambda() / sol.ste();
      const double slope = std::abs(diagnostics::front_slope(sol) - expected) / std::abs(expected);
      worst_res = std::max(worst_res, res);
      worst_y0 = std::max(worst_y0, y0);
      worst_yl = std::max(worst_yl, yl);
      worst_slope = std::max(worst_slope, slope);
      if ((res > 1e-8 || y0 > 1e-10 || yl > 1e-8 || slope > 1e-4) && bad.empty()) bad = " first failure: " + case_name(key);
    }
    const bool ok = worst_res <= 1e-8 && worst_y0 <= 1e-10 && worst_yl <= 1e-8 && worst_slope <= 1e-4;
    return Outcome{ok, "max residual=" + fmt("%.2e", worst_res) + " |y(0)-1|=" + fmt("%.2e", worst_y0) +
                           " |y(lambda)|=" + fmt("%.2e", worst_yl) + " slope_rel=" + fmt("%.2e", worst_slope) + bad};
  });

  report(3, "ODE residual over 200 interior nodes", 60.0, [&] {
    if (!grid) grid = solve_grid();
    double worst = 0.0;
    std::string where;
    for (const auto& [key, sol] : *grid) {
      const double r = diagnostics::ode_residual_max(sol, 200);
      if (r > worst) {
        worst = r;
        where = case_name(key);
      }
    }
    return Outcome{worst <= 1e-4, "max residual=" + fmt("%.2e", worst) + " at " + where};
  });

  report(4, "front-fixing PDE oracle at 256 x 4096, three-level convergence", 300.0, [] {
    Outcome out;
    for (int src = 0; src < 2; ++src) {
      const Problem prob = src == 0 ? Problem::from_dimensionless(1.0, 1.0, 1.0, ExponentialSource{})
                                    : Problem::from_dimensionless(1.0, 1.0, 1.0, FluxFeedbackSource{}, 1.0);
      const auto sol = SimilaritySolution::solve(prob);
      oracle::OracleConfig coarse;
      coarse.n_space = 64;
      coarse.n_time = 1024;
      const auto study = oracle::grid_study(sol, coarse, 3);
      const auto& fine = study.levels.back();
      const double span = prob.boundary.span();
      const bool ok = fine.n_space == 256 && fine.n_time == 4096 && fine.front_rel_err <= 0.01 &&
                      fine.temp_max_err <= 0.01 * span && study.self_convergence_order >= 1.8;
      out.pass = out.pass && ok;
      out.detail += std::string(src == 0 ? "exp:" : " A=1:") + " front=" + fmt("%.2e", fine.front_rel_err) +
                    " temp=" + fmt("%.2e", fine.temp_max_err / span) + "*span order=" +
                    fmt("%.3f", study.self_convergence_order);
    }
    return out;
  });

  report(5, "errata arbitration for the sign of lambda e^{lambda^2}", 10.0, [] {
    const auto beta = [](double e) { return 0.5 * std::exp(-e * e); };
    const double lam = similarity::solve_lambda_source1(1.0, 1.0, 1.0, beta);
    const double top = similarity::lambda_target(1.0, 1.0);
    const auto good = similarity::psi_source1(lam, 1.0, 1.0, 1.0, beta);
    const auto bad = errata::psi_source1_flipped_sign(lam, 1.0, 1.0, 1.0, beta);
    const double y_good = std::abs(similarity::y_from_psi(1.0, 1.0, good.evaluate(lam)));
    const double psi_bad = bad.evaluate(lam);
    // Printed form overshoots Phi's range; clamped into it, y(lambda) is still far from 0.
    const double y_bad = std::abs(similarity::phi_inverse(1.0, 1.0, std::clamp(psi_bad, 0.0, top)));
    const bool ok = y_good <= 1e-8 && y_bad > 1e-2;
    return Outcome{ok, "corrected |y(lambda)|=" + fmt("%.2e", y_good) + " printed Psi(lambda)=" +
                           fmt("%.6f", psi_bad) + " -> |y(lambda)|=" + fmt("%.6f", y_bad)};
  });

  report(6, "consistency limits", 30.0, [] {
    double worst_A = 0.0, worst_closed = 0.0, worst_inv = 0.0;
    for (double ste : kSte) {
      for (double delta : kDelta) {
        for (double p : kP) {
          const double l0 = similarity::solve_lambda_source1(ste, delta, p, [](double) { return 0.0; });
          const double l2 = similarity::solve_lambda_source2(ste, delta, p, 1e-10);
          worst_A = std::max(worst_A, std::abs(l0 - l2));
          const auto beta = [](double e) { return 0.5 * std::exp(-e * e); };
          const auto closed = similarity::solve_exponential_case(ste, delta, p);
          const double quad = similarity::solve_lambda_source1(ste, delta, p, beta);
          worst_closed = std::max(worst_closed, std::abs(closed.lambda - quad));
          for (int i = 0; i <= 10; ++i) {
            const double eta = closed.lambda * i / 10.0;
            worst_closed = std::max(worst_closed, std::abs(closed.y(eta) - similarity::y_profile_source1(
                                                                                 closed.lambda, ste, delta, p, beta, eta)));
          }
        }
      }
    }
    for (double delta : {1e-12, 1e-6, 0.1, 1.0, 5.0, 100.0}) {
      const double top = similarity::lambda_target(delta, 1.0);
      for (int i = 0; i <= 1000; ++i) {
        const double w = top * i / 1000.0;
        worst_inv = std::max(worst_inv, std::abs(similarity::phi_inverse_p1(delta, w) - similarity::phi_inverse(delta, 1.0, w)));
      }
    }
    const bool ok = worst_A <= 1e-8 && worst_closed <= 1e-9 && worst_inv <= 1e-10;
    return Outcome{ok, "A->0 gap=" + fmt("%.2e", worst_A) + " closed-vs-quadrature=" + fmt("%.2e", worst_closed) +
                           " p=1 inverse=" + fmt("%.2e", worst_inv)};
  });

  report(7, "monotonicity suite", 30.0, [&] {
    if (!grid) grid = solve_grid();
    int slices = 0, slice_fail = 0, shape_fail = 0, phi_fail = 0;
    for (int src = 0; src < 4; ++src) {
      for (double delta : kDelta) {
        for (double p : kP) {
          ++slices;
          double prev = 0.0;
          for (double ste : kSte) {
            const auto& sol = grid->at(Key{src, delta, p, ste});
            if (!(sol.lambda() > prev)) ++slice_fail;
            prev = sol.lambda();
            const auto shape = diagnostics::profile_shape(sol, 400);
            if (!shape.in_unit_range || !shape.strictly_decreasing || !shape.psi_decreasing) ++shape_fail;
          }
          double prev_phi = -1.0;
          for (int i = 0; i <= 1000; ++i) {
            const double v = similarity::phi_map(delta, p, i / 1000.0);
            if (!(v > prev_phi)) ++phi_fail;
            prev_phi = v;
          }
        }
      }
    }
    const bool ok = slice_fail == 0 && shape_fail == 0 && phi_fail == 0;
    return Outcome{ok, std::to_string(slices) + " Ste slices, lambda violations=" + std::to_string(slice_fail) +
                           " shape violations=" + std::to_string(shape_fail) +
                           " Phi violations=" + std::to_string(phi_fail)};
  });

  std::printf("%s: %d of 7 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
