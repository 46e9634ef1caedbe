#pragma once

#include "stefan/similarity.hpp"

/// Incorrect integrated forms of the similarity problem, kept as regression
/// fixtures. Each one contradicts the similarity ODE it claims to integrate;
/// tests assert that they fail the boundary conditions or the PDE oracle.
/// docs/errata.md lists them next to the correct forms.
namespace stefan::errata {

using numerics::ScalarFn;

/// Psi_1 with the sign of lambda e^{lambda^2} flipped. Psi(lambda) != 0 for beta >= 0.
similarity::PsiProfile psi_source1_flipped_sign(double lambda, double ste, double delta, double p,
                                                ScalarFn beta);

/// Exponential-source lambda-equation
///   (1 - e^{-x^2})/Ste + sqrt(pi)/Ste x erf(x) (e^{x^2} - 1) = 1 + delta/(p+1),
/// which does not follow from substituting beta = e^{-eta^2}/2.
similarity::LambdaEquation lambda_equation_exponential_misderived(double ste, double delta, double p);

/// Exponential-source Psi matching the misderived lambda-equation.
similarity::PsiProfile psi_exponential_misderived(double lambda, double ste, double delta, double p);

/// y'(0) carrying a spurious factor 2: -4 (lambda e^{lambda^2} + 2 I) / (Ste (1 + delta)).
double y_prime0_source1_doubled(double lambda, double ste, double delta, const ScalarFn& beta);

}  // namespace stefan::errata
