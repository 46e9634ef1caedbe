#include "stefan/reconstruct.hpp"

#include <cmath>
#include <sstream>

namespace stefan::reconstruct {

namespace {

void require_positive_time(double t) {
  if (!(t > 0.0)) {
    std::ostringstream msg;
    msg << "time must be > 0, got " << t;
    throw Error(ErrorCode::InvalidInput, msg.str());
  }
}

}  // namespace

double front_position(const SimilaritySolution& sol, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidInput, "front position needs t >= 0");
  return 2.0 * sol.dimensionless().a * sol.lambda() * std::sqrt(t);
}

double similarity_variable(const SimilaritySolution& sol, const PhysicalQuery& q) {
  require_positive_time(q.t);
  return q.x / (2.0 * sol.dimensionless().a * std::sqrt(q.t));
}

double temperature(const SimilaritySolution& sol, const PhysicalQuery& q, ProfileEvaluation mode) {
  require_positive_time(q.t);
  const double s = front_position(sol, q.t);
  if (q.x < 0.0 || q.x > s * (1.0 + kFrontSlack)) {
    std::ostringstream msg;
    msg << "x = " << q.x << " outside the liquid region [0, " << s << "] at t = " << q.t;
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
  const auto& bd = sol.problem().boundary;
  if (q.x >= s) return bd.theta_f;
  const double eta = std::min(similarity_variable(sol, q), sol.lambda());
  const double y = (mode == ProfileEvaluation::Exact) ? sol.y(eta) : sol.y_interpolated(eta);
  return bd.span() * y + bd.theta_f;
}

double fixed_face_flux(const SimilaritySolution& sol, double t) {
  require_positive_time(t);
  return sol.problem().boundary.span() * sol.y_prime0() /
         (2.0 * sol.dimensionless().a * std::sqrt(t));
}

double source_field(const SimilaritySolution& sol, const PhysicalQuery& q) {
  require_positive_time(q.t);
  const Problem& prob = sol.problem();
  if (const auto* fb = std::get_if<FluxFeedbackSource>(&prob.source)) {
    return fb->lambda0 / std::sqrt(q.t) * fixed_face_flux(sol, q.t);
  }
  const double eta = similarity_variable(sol, q);
  return prob.material.rho * prob.material.latent_heat / q.t * source_beta(prob.source, eta);
}

}  // namespace stefan::reconstruct
