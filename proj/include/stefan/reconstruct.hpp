#pragma once

#include "stefan/similarity.hpp"

namespace stefan::reconstruct {

using similarity::SimilaritySolution;

struct PhysicalQuery {
  double x = 0.0;  // m
  double t = 0.0;  // s
};

enum class ProfileEvaluation {
  Interpolated,  // Chebyshev table of Psi, then Phi^{-1}
  Exact,         // Psi by quadrature at every query
};

/// Relative slack beyond s(t) inside which queries snap to the front.
inline constexpr double kFrontSlack = 1e-9;

/// s(t) = 2 a lambda sqrt(t).
double front_position(const SimilaritySolution& sol, double t);

/// Similarity variable x / (2 a sqrt(t)).
double similarity_variable(const SimilaritySolution& sol, const PhysicalQuery& q);

/// theta(x, t) = (theta0 - theta_f) y(x / (2 a sqrt(t))) + theta_f on 0 <= x <= s(t).
/// Points within kFrontSlack beyond the front return theta_f; further out is OutOfDomain.
double temperature(const SimilaritySolution& sol, const PhysicalQuery& q,
                   ProfileEvaluation mode = ProfileEvaluation::Interpolated);

/// d(theta)/dx at x = 0: (theta0 - theta_f) y'(0) / (2 a sqrt(t)).
double fixed_face_flux(const SimilaritySolution& sol, double t);

/// Value of the active heat source H at (x, t). Feedback sources ignore x.
double source_field(const SimilaritySolution& sol, const PhysicalQuery& q);

}  // namespace stefan::reconstruct
