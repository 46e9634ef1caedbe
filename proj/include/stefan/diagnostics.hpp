#pragma once

#include "stefan/similarity.hpp"

/// Finite-difference checks of a solved similarity profile against the ODE and
/// its boundary conditions. Derivatives are taken of the flux variable
/// V(eta) = Phi(y(eta)), which satisfies V' = (1 + delta y^p) y' and stays
/// smooth up to the front even when y^p does not (p < 1).
namespace stefan::diagnostics {

using similarity::SimilaritySolution;

/// Fourth-order backward difference of V at eta = lambda; equals y'(lambda) since Phi'(0) = 1.
double front_slope(const SimilaritySolution& sol);

/// Fourth-order forward difference of y at eta = 0.
double surface_slope(const SimilaritySolution& sol);

/// max |V'' + 2 eta V' - R(eta)| over n_interior equispaced nodes in (0, lambda),
/// using fourth-order central differences.
double ode_residual_max(const SimilaritySolution& sol, int n_interior = 200);

struct ShapeReport {
  bool in_unit_range = true;       // 0 <= y <= 1
  bool strictly_decreasing = true;  // y
  bool psi_decreasing = true;       // Psi
  double min_y = 1.0;
  double max_y = 0.0;
};

/// Samples y and Psi on n + 1 equispaced points of [0, lambda].
ShapeReport profile_shape(const SimilaritySolution& sol, int n = 200);

}  // namespace stefan::diagnostics
