#include "stefan/model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace stefan {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidInput, what);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double nonlinear_factor(const Material& mat, const BoundaryData& bd, double theta) {
  bd.validate();
  const double slack = kTemperatureSlack * bd.span();
  if (!(theta >= bd.theta_f - slack && theta <= bd.theta0 + slack)) {
    std::ostringstream msg;
    msg << "temperature " << theta << " outside [" << bd.theta_f << ", " << bd.theta0 << "]";
    throw Error(ErrorCode::InvalidInput, msg.str());
  }
  const double u = std::clamp((theta - bd.theta_f) / bd.span(), 0.0, 1.0);
  return 1.0 + mat.delta * std::pow(u, mat.p);
}

}  // namespace

double Material::diffusivity_scale() const { return std::sqrt(k0 / (rho * c0)); }

void Material::validate() const {
  require(rho > 0.0, "material.rho must be > 0");
  require(c0 > 0.0, "material.c0 must be > 0");
  require(k0 > 0.0, "material.k0 must be > 0");
  require(latent_heat > 0.0, "material.latent_heat must be > 0");
  require(delta > 0.0, "material.delta must be > 0");
  require(p > 0.0, "material.p must be > 0");
}

void BoundaryData::validate() const {
  require(theta0 > theta_f, "boundary.theta0 must exceed boundary.theta_f");
}

std::string source_name(const SourceSpec& source) {
  return std::visit(overloaded{
                        [](const SimilaritySource& s) { return "similarity:" + s.label; },
                        [](const ExponentialSource&) { return std::string("exponential"); },
                        [](const FluxFeedbackSource&) { return std::string("flux_feedback"); },
                        [](const NoSource&) { return std::string("none"); },
                    },
                    source);
}

double source_beta(const SourceSpec& source, double eta) {
  return std::visit(overloaded{
                        [&](const SimilaritySource& s) { return s.beta(eta); },
                        [&](const ExponentialSource&) { return 0.5 * std::exp(-eta * eta); },
                        [](const FluxFeedbackSource&) -> double {
                          throw Error(ErrorCode::InvalidInput, "flux feedback source has no beta profile");
                        },
                        [](const NoSource&) { return 0.0; },
                    },
                    source);
}

void Problem::validate() const {
  material.validate();
  boundary.validate();
  if (const auto* fb = std::get_if<FluxFeedbackSource>(&source)) {
    require(fb->lambda0 > 0.0, "source.lambda0 must be > 0");
  }
  if (const auto* sim = std::get_if<SimilaritySource>(&source)) {
    require(static_cast<bool>(sim->beta), "similarity source needs a beta function");
  }
}

Dimensionless Problem::dimensionless() const {
  validate();
  Dimensionless d;
  d.ste = stefan_number(material, boundary);
  d.a = material.diffusivity_scale();
  if (const auto* fb = std::get_if<FluxFeedbackSource>(&source)) {
    d.A = feedback_coefficient(material, fb->lambda0);
  }
  return d;
}

Problem Problem::from_dimensionless(double ste, double delta, double p, SourceSpec source,
                                    std::optional<double> A) {
  require(ste > 0.0, "Ste must be > 0");
  Problem prob;
  prob.material = Material{1.0, 1.0, 1.0, 1.0, delta, p};
  prob.boundary = BoundaryData{ste, 0.0};
  if (std::holds_alternative<FluxFeedbackSource>(source)) {
    require(A.has_value(), "feedback source requires A");
    require(*A > 0.0, "A must be > 0");
    // rho = c0 = a = 1, so A = 2 lambda0.
    source = FluxFeedbackSource{0.5 * *A};
  }
  prob.source = std::move(source);
  prob.validate();
  return prob;
}

std::string fingerprint(const Problem& problem) {
  std::ostringstream out;
  out << std::setprecision(17);
  const auto& m = problem.material;
  out << "rho=" << m.rho << ";c0=" << m.c0 << ";k0=" << m.k0 << ";l=" << m.latent_heat
      << ";delta=" << m.delta << ";p=" << m.p << ";theta0=" << problem.boundary.theta0
      << ";theta_f=" << problem.boundary.theta_f << ";source=" << source_name(problem.source);
  if (const auto* fb = std::get_if<FluxFeedbackSource>(&problem.source)) {
    out << ";lambda0=" << fb->lambda0;
  }
  return out.str();
}

double stefan_number(const Material& mat, const BoundaryData& bd) {
  bd.validate();
  require(mat.c0 > 0.0 && mat.latent_heat > 0.0, "c0 and latent_heat must be > 0");
  return mat.c0 * bd.span() / mat.latent_heat;
}

double feedback_coefficient(const Material& mat, double lambda0) {
  require(lambda0 > 0.0, "lambda0 must be > 0");
  require(mat.rho > 0.0 && mat.c0 > 0.0 && mat.k0 > 0.0, "rho, c0, k0 must be > 0");
  return 2.0 * lambda0 / (mat.rho * mat.c0 * mat.diffusivity_scale());
}

double conductivity(const Material& mat, const BoundaryData& bd, double theta) {
  return mat.k0 * nonlinear_factor(mat, bd, theta);
}

double specific_heat(const Material& mat, const BoundaryData& bd, double theta) {
  return mat.c0 * nonlinear_factor(mat, bd, theta);
}

}  // namespace stefan
