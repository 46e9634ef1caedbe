#include "stefan/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace stefan::diagnostics {

namespace {

double flux_variable(const SimilaritySolution& sol, double eta) {
  return similarity::phi_map(sol.delta(), sol.p(), sol.y(eta));
}

}  // namespace

double front_slope(const SimilaritySolution& sol) {
  const double lam = sol.lambda();
  const double h = 2e-3 * lam;
  std::array<double, 5> v{};
  for (int k = 0; k < 5; ++k) v[k] = flux_variable(sol, lam - k * h);
  return (25.0 * v[0] - 48.0 * v[1] + 36.0 * v[2] - 16.0 * v[3] + 3.0 * v[4]) / (12.0 * h);
}

double surface_slope(const SimilaritySolution& sol) {
  const double h = 2e-3 * sol.lambda();
  std::array<double, 5> y{};
  for (int k = 0; k < 5; ++k) y[k] = sol.y(k * h);
  return (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
}

double ode_residual_max(const SimilaritySolution& sol, int n_interior) {
  const double lam = sol.lambda();
  const double spacing = lam / (n_interior + 1);
  double worst = 0.0;
  for (int i = 1; i <= n_interior; ++i) {
    const double eta = i * spacing;
    // Stencil stays inside [0, lambda].
    const double h = std::min({0.5 * spacing, 0.5 * eta, 0.5 * (lam - eta)});
    const double vm2 = flux_variable(sol, eta - 2 * h);
    const double vm1 = flux_variable(sol, eta - h);
    const double v0 = flux_variable(sol, eta);
    const double vp1 = flux_variable(sol, eta + h);
    const double vp2 = flux_variable(sol, eta + 2 * h);
    const double d1 = (-vp2 + 8.0 * vp1 - 8.0 * vm1 + vm2) / (12.0 * h);
    const double d2 = (-vp2 + 16.0 * vp1 - 30.0 * v0 + 16.0 * vm1 - vm2) / (12.0 * h * h);
    worst = std::max(worst, std::abs(d2 + 2.0 * eta * d1 - sol.ode_rhs(eta)));
  }
  return worst;
}

ShapeReport profile_shape(const SimilaritySolution& sol, int n) {
  ShapeReport report;
  const double lam = sol.lambda();
  double prev_y = 0.0;
  double prev_psi = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double eta = lam * i / n;
    const double y = sol.y(eta);
    const double psi = sol.psi(eta);
    report.min_y = std::min(report.min_y, y);
    report.max_y = std::max(report.max_y, y);
    if (y < 0.0 || y > 1.0) report.in_unit_range = false;
    if (i > 0) {
      if (!(y < prev_y)) report.strictly_decreasing = false;
      if (!(psi < prev_psi)) report.psi_decreasing = false;
    }
    prev_y = y;
    prev_psi = psi;
  }
  return report;
}

}  // namespace stefan::diagnostics
