#pragma once

#include <memory>

#include "stefan/model.hpp"
#include "stefan/numerics.hpp"

/// Similarity reduction of the one-phase melting problem.
///
/// With y(eta) = (theta - theta_f)/(theta0 - theta_f), eta = x / (2 a sqrt(t)) and
/// s(t) = 2 a lambda sqrt(t), the temperature profile solves on 0 < eta < lambda
///
///   2 eta (1 + delta y^p) y' + [(1 + delta y^p) y']' = R(eta),
///   y(0) = 1,  y(lambda) = 0,  y'(lambda) = -2 lambda / Ste,
///
/// where R = (4/Ste) beta(eta) for similarity-type sources and R = A y'(0) for
/// the flux-feedback source. Multiplying by exp(eta^2) and integrating twice
/// gives Phi(y(eta)) = Psi(eta) with Phi(x) = x + delta x^{p+1}/(p+1), and
/// evaluating at eta = lambda gives a scalar equation phi(lambda) = 1 + delta/(p+1)
/// whose left side is strictly increasing. See docs/derivation.md.
namespace stefan::similarity {

using numerics::ScalarFn;
using numerics::Tolerance;

/// Right side of every lambda-equation: Phi(1) = 1 + delta/(p+1).
double lambda_target(double delta, double p);

/// Phi(x) = x + delta/(p+1) x^{p+1} on [0, 1].
double phi_map(double delta, double p, double x);

/// Inverse of phi_map on [0, 1 + delta/(p+1)].
double phi_inverse(double delta, double p, double w, const Tolerance& tol = {1e-13, 1e-13, 200});

/// Closed-form inverse of Phi for p = 1: (sqrt(1 + 2 delta w) - 1) / delta.
double phi_inverse_p1(double delta, double w);

/// Clamps Psi values within 1e-9 of [0, 1 + delta/(p+1)] and inverts Phi.
double y_from_psi(double delta, double p, double psi_value);

/// Quadrature settings used inside the lambda-equations and Psi profiles.
inline constexpr Tolerance kQuadratureTol{1e-14, 1e-13, 200};

struct LambdaEquation {
  ScalarFn evaluate;  // strictly increasing, vanishes at 0+
  double target = 1.0;

  double residual(double x) const { return evaluate(x) - target; }
};

LambdaEquation lambda_equation_no_source(double ste, double delta, double p);
LambdaEquation lambda_equation_source1(double ste, double delta, double p, ScalarFn beta,
                                       const Tolerance& quad = kQuadratureTol);
/// Source 1 with beta = exp(-eta^2)/2, integrals in closed form.
LambdaEquation lambda_equation_exponential(double ste, double delta, double p);
LambdaEquation lambda_equation_source2(double ste, double delta, double p, double A,
                                       const Tolerance& quad = kQuadratureTol);

/// Root of a lambda-equation from the seed bracket [1e-8, 1] with hi-doubling.
double solve_lambda(const LambdaEquation& eq, const Tolerance& tol = {});

double solve_lambda_source1(double ste, double delta, double p, ScalarFn beta,
                            const Tolerance& tol = {});
double solve_lambda_source2(double ste, double delta, double p, double A, const Tolerance& tol = {});

/// Psi on [0, lambda]; decreasing from 1 + delta/(p+1) to 0 when lambda is the root.
struct PsiProfile {
  ScalarFn evaluate;
  double lambda = 0.0;
  double target = 1.0;
};

PsiProfile psi_no_source(double lambda, double ste, double delta, double p);
PsiProfile psi_source1(double lambda, double ste, double delta, double p, ScalarFn beta,
                       const Tolerance& quad = kQuadratureTol);
PsiProfile psi_exponential(double lambda, double ste, double delta, double p);
PsiProfile psi_source2(double lambda, double ste, double delta, double p, double A,
                       const Tolerance& quad = kQuadratureTol);

/// y(eta) = Phi^{-1}(Psi_1(eta)); OutOfRange for eta outside [0, lambda].
double y_profile_source1(double lambda, double ste, double delta, double p, const ScalarFn& beta,
                         double eta);
double y_profile_source2(double lambda, double ste, double delta, double p, double A, double eta);

/// y'(0) = -2 (lambda e^{lambda^2} + 2 int_0^lambda beta e^{xi^2}) / (Ste (1 + delta)).
double y_prime0_source1(double lambda, double ste, double delta, const ScalarFn& beta,
                        const Tolerance& quad = kQuadratureTol);
double y_prime0_exponential(double lambda, double ste, double delta);
double y_prime0_no_source(double lambda, double ste, double delta);
/// y'(0) = -2 lambda e^{lambda^2} / (Ste (A int_0^lambda e^{z^2} + 1 + delta)).
double y_prime0_source2(double lambda, double ste, double delta, double A,
                        const Tolerance& quad = kQuadratureTol);

struct ExponentialCase {
  double lambda = 0.0;
  double delta = 0.0;
  double p = 0.0;
  PsiProfile psi;

  double y(double eta) const;
};

/// Exponential source solved without quadrature.
ExponentialCase solve_exponential_case(double ste, double delta, double p, const Tolerance& tol = {});

struct SolveOptions {
  Tolerance root{};
  Tolerance quadrature = kQuadratureTol;
  int table_size = 129;
  /// Exponential sources go through the closed-form equations unless cleared.
  bool exponential_closed_form = true;
};

/// Solved similarity profile for one problem. Immutable; copies share state.
class SimilaritySolution {
 public:
  /// Solves the lambda-equation for the problem's source model.
  static SimilaritySolution solve(const Problem& problem, const SolveOptions& options = {});

  /// Builds Psi, y'(0) and the profile table for a prescribed lambda, which
  /// need not be the root. Used to study perturbed solutions.
  static SimilaritySolution assemble(const Problem& problem, double lambda,
                                     const SolveOptions& options = {});

  double lambda() const;
  double y_prime0() const;
  double ste() const;
  double delta() const;
  double p() const;
  double target() const;
  const Dimensionless& dimensionless() const;
  const Problem& problem() const;
  const LambdaEquation& lambda_equation() const;

  double lambda_residual() const;
  double psi(double eta) const;
  /// Pointwise y via Psi and Phi^{-1}.
  double y(double eta) const;
  /// y via Chebyshev interpolation of Psi followed by Phi^{-1}.
  double y_interpolated(double eta) const;
  /// Right side R(eta) of the similarity ODE.
  double ode_rhs(double eta) const;

 private:
  struct State;
  explicit SimilaritySolution(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  double checked_eta(double eta) const;

  std::shared_ptr<const State> state_;
};

}  // namespace stefan::similarity
