#pragma once

#include <Eigen/Dense>

#include <functional>

#include "stefan/error.hpp"

namespace stefan::numerics {

using ScalarFn = std::function<double(double)>;

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_iter = 200;

  void validate() const;
};

struct Bracket {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  void validate() const;
};

/// Subdivision depth limit of the adaptive quadrature.
inline constexpr int kMaxQuadratureDepth = 60;

/// Largest upper end the root bracket may be expanded to; exp(x^2) overflows near 26.6.
inline constexpr double kBracketCap = 50.0;

/// Error function; odd, accurate to a few ulp.
double erf(double x);

/// Adaptive Gauss-Kronrod (7/15) quadrature of a smooth integrand on [a, b].
/// The estimated error is kept below max(abs_tol, rel_tol * |result|).
/// Throws MaxSubdivisionsExceeded when `max_depth` bisection levels do not suffice.
double integrate(const ScalarFn& f, double a, double b, const Tolerance& tol = {},
                 int max_depth = kMaxQuadratureDepth);

/// Root of g(x) = target for g continuous and strictly increasing.
///
/// The seed bracket is widened as needed: `lo` is halved toward 0+ while
/// g(lo) > target (at most 60 times), `hi` is doubled up to kBracketCap while
/// g(hi) < target. Bisection then narrows the bracket until
/// |g(x) - target| <= abs_tol and the width is <= rel_tol * x.
double find_root_increasing(const ScalarFn& g, double target, Bracket seed,
                            const Tolerance& tol = {});

/// Solves F(x) = w on `domain` for strictly increasing F by Newton iteration
/// with the supplied derivative; steps that leave the current bracket are
/// replaced by bisection. Values of w within abs_tol outside
/// [F(lo), F(hi)] are clamped, anything further is OutOfRange.
double invert_increasing(const ScalarFn& F, const ScalarFn& F_deriv, double w, Bracket domain,
                         const Tolerance& tol = {});

/// Barycentric interpolation on Chebyshev points of the second kind.
class ChebyshevInterpolant {
 public:
  ChebyshevInterpolant() = default;
  ChebyshevInterpolant(const ScalarFn& f, double a, double b, int n_nodes);

  double operator()(double x) const;

  int size() const { return static_cast<int>(nodes_.size()); }
  double lower() const { return a_; }
  double upper() const { return b_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& values() const { return values_; }

 private:
  double a_ = 0.0;
  double b_ = 0.0;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd values_;
  Eigen::VectorXd weights_;
};

}  // namespace stefan::numerics
