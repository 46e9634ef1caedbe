#include "stefan/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace stefan::numerics {

namespace {

// Kronrod abscissae on [-1, 1] (non-negative half); odd indices are the Gauss nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct RuleResult {
  double kronrod;
  double error;
};

RuleResult gauss_kronrod_15(const ScalarFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

double adapt(const ScalarFn& f, double a, double b, const RuleResult& whole, double local_tol,
             int depth, int max_depth) {
  if (whole.error <= local_tol) return whole.kronrod;
  const double mid = 0.5 * (a + b);
  if (depth >= max_depth || mid <= a || mid >= b) {
    std::ostringstream msg;
    msg << "no convergence on [" << a << ", " << b << "] after " << depth
        << " subdivision levels (error estimate " << whole.error << ")";
    throw Error(ErrorCode::MaxSubdivisionsExceeded, msg.str());
  }
  const RuleResult left = gauss_kronrod_15(f, a, mid);
  const RuleResult right = gauss_kronrod_15(f, mid, b);
  // Refined halves already meeting the budget end the recursion early.
  if (left.error + right.error <= local_tol) return left.kronrod + right.kronrod;
  return adapt(f, a, mid, left, 0.5 * local_tol, depth + 1, max_depth) +
         adapt(f, mid, b, right, 0.5 * local_tol, depth + 1, max_depth);
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1) {
    throw Error(ErrorCode::InvalidInput, "tolerance requires abs_tol > 0, rel_tol > 0, max_iter >= 1");
  }
}

void Bracket::validate() const {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidInput, "bracket requires lo < hi");
}

double erf(double x) { return std::erf(x); }

double integrate(const ScalarFn& f, double a, double b, const Tolerance& tol, int max_depth) {
  tol.validate();
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, tol, max_depth);
  const RuleResult whole = gauss_kronrod_15(f, a, b);
  if (!std::isfinite(whole.kronrod)) {
    throw Error(ErrorCode::MaxSubdivisionsExceeded, "integrand is not finite on the interval");
  }
  const double budget = std::max(tol.abs_tol, tol.rel_tol * std::abs(whole.kronrod));
  return adapt(f, a, b, whole, budget, 0, max_depth);
}

double find_root_increasing(const ScalarFn& g, double target, Bracket seed, const Tolerance& tol) {
  tol.validate();
  seed.validate();
  double lo = seed.lo;
  double hi = std::min(seed.hi, kBracketCap);
  if (!(lo < hi)) throw Error(ErrorCode::InvalidInput, "seed bracket lies above the expansion cap");

  double g_lo = g(lo);
  for (int i = 0; g_lo > target && i < 60 && lo > 0.0; ++i) {
    hi = lo;
    lo *= 0.5;
    g_lo = g(lo);
  }
  if (g_lo > target) {
    std::ostringstream msg;
    msg << "g(" << lo << ") = " << g_lo << " exceeds target " << target;
    throw Error(ErrorCode::NotBracketed, msg.str());
  }

  double g_hi = g(hi);
  while (!(g_hi >= target)) {
    if (std::isnan(g_hi) || hi >= kBracketCap) {
      std::ostringstream msg;
      msg << "g(" << hi << ") = " << g_hi << " still below target " << target
          << " at the expansion cap " << kBracketCap;
      throw Error(ErrorCode::BracketExpansionFailed, msg.str());
    }
    lo = hi;
    g_lo = g_hi;
    hi = std::min(2.0 * hi, kBracketCap);
    g_hi = g(hi);
  }
  if (g_lo == target) return lo;
  if (g_hi == target) return hi;

  double best = 0.5 * (lo + hi);
  for (int it = 0; it < tol.max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    best = mid;
    if (g_mid == target) return mid;
    if (g_mid < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    const bool small_residual = std::abs(g_mid - target) <= tol.abs_tol;
    const bool narrow = hi - lo <= tol.rel_tol * std::abs(mid);
    const bool exhausted = hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid);
    if (small_residual && (narrow || exhausted)) return mid;
    if (exhausted) break;
  }
  const double residual = g(best) - target;
  if (std::abs(residual) <= tol.abs_tol) return best;
  std::ostringstream msg;
  msg << "bisection stopped at x = " << best << " with residual " << residual;
  throw Error(ErrorCode::NonConvergence, msg.str());
}

double invert_increasing(const ScalarFn& F, const ScalarFn& F_deriv, double w, Bracket domain,
                         const Tolerance& tol) {
  tol.validate();
  domain.validate();
  double lo = domain.lo;
  double hi = domain.hi;
  const double f_lo = F(lo);
  const double f_hi = F(hi);
  if (w < f_lo - tol.abs_tol || w > f_hi + tol.abs_tol) {
    std::ostringstream msg;
    msg << "value " << w << " outside [" << f_lo << ", " << f_hi << "]";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
  if (w <= f_lo) return lo;
  if (w >= f_hi) return hi;

  double x = lo + (w - f_lo) / (f_hi - f_lo) * (hi - lo);
  for (int it = 0; it < tol.max_iter; ++it) {
    const double r = F(x) - w;
    if (r == 0.0) return x;
    if (r < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = F_deriv(x);
    double next = (slope > 0.0) ? x - r / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = next - x;
    x = next;
    if (std::abs(r) <= tol.abs_tol && std::abs(step) <= tol.rel_tol * std::abs(x)) return x;
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
  }
  if (std::abs(F(x) - w) <= tol.abs_tol) return x;
  throw Error(ErrorCode::NonConvergence, "safeguarded Newton inversion did not converge");
}

ChebyshevInterpolant::ChebyshevInterpolant(const ScalarFn& f, double a, double b, int n_nodes)
    : a_(a), b_(b) {
  if (n_nodes < 2) throw Error(ErrorCode::InvalidInput, "Chebyshev table needs at least 2 nodes");
  if (!(a < b)) throw Error(ErrorCode::InvalidInput, "Chebyshev interval requires a < b");
  const int n = n_nodes - 1;
  nodes_.resize(n_nodes);
  values_.resize(n_nodes);
  weights_.resize(n_nodes);
  for (int j = 0; j <= n; ++j) {
    const double cheb = std::cos(std::numbers::pi * j / n);
    nodes_[j] = 0.5 * (a + b) + 0.5 * (b - a) * cheb;
    values_[j] = f(nodes_[j]);
    weights_[j] = ((j % 2 == 0) ? 1.0 : -1.0) * ((j == 0 || j == n) ? 0.5 : 1.0);
  }
}

double ChebyshevInterpolant::operator()(double x) const {
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index j = 0; j < nodes_.size(); ++j) {
    const double diff = x - nodes_[j];
    if (diff == 0.0) return values_[j];
    const double term = weights_[j] / diff;
    num += term * values_[j];
    den += term;
  }
  return num / den;
}

}  // namespace stefan::numerics
