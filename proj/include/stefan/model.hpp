#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "stefan/error.hpp"

namespace stefan {

/// Thermal data of the melting material. Conductivity and specific heat share
/// the nonlinear factor 1 + delta * u^p with u the normalized temperature.
struct Material {
  double rho = 1.0;          // kg/m^3
  double c0 = 1.0;           // J/(kg K), specific heat at the phase-change temperature
  double k0 = 1.0;           // W/(m K), conductivity at the phase-change temperature
  double latent_heat = 1.0;  // J/kg
  double delta = 1.0;
  double p = 1.0;

  /// Thermal diffusivity scale sqrt(k0 / (rho c0)).
  double diffusivity_scale() const;
  void validate() const;
};

struct BoundaryData {
  double theta0 = 1.0;   // K, imposed at x = 0
  double theta_f = 0.0;  // K, phase-change temperature

  double span() const { return theta0 - theta_f; }
  void validate() const;
};

/// Heat source H1 = (rho l / t) beta(x / (2 a sqrt(t))) with a caller-supplied beta.
/// beta must be nonnegative, integrable near 0, and beta(eta) exp(eta^2) integrable
/// at infinity; none of this is checked at runtime.
struct SimilaritySource {
  std::function<double(double)> beta;
  std::string label = "custom";
};

/// H1 with beta(eta) = exp(-eta^2) / 2.
struct ExponentialSource {};

/// H2 = (lambda0 / sqrt(t)) d(theta)/dx (0, t).
struct FluxFeedbackSource {
  double lambda0 = 1.0;
};

struct NoSource {};

using SourceSpec = std::variant<SimilaritySource, ExponentialSource, FluxFeedbackSource, NoSource>;

std::string source_name(const SourceSpec& source);

/// beta(eta) of a similarity-type source; zero for NoSource. Throws for FluxFeedbackSource.
double source_beta(const SourceSpec& source, double eta);

struct Dimensionless {
  double ste = 1.0;
  double a = 1.0;
  std::optional<double> A;  // only for FluxFeedbackSource
};

struct Problem {
  Material material;
  BoundaryData boundary;
  SourceSpec source = NoSource{};

  void validate() const;
  Dimensionless dimensionless() const;

  /// Problem with unit rho, c0, k0, l, theta_f = 0 and theta0 = Ste, so that
  /// dimensionless() returns (Ste, delta, p, A) bit for bit. The diffusivity scale is 1.
  static Problem from_dimensionless(double ste, double delta, double p, SourceSpec source,
                                    std::optional<double> A = std::nullopt);
};

/// Textual identity of the physical parameters; two runs are comparable iff equal.
std::string fingerprint(const Problem& problem);

double stefan_number(const Material& mat, const BoundaryData& bd);
double feedback_coefficient(const Material& mat, double lambda0);

/// Relative slack allowed on temperature arguments, as a fraction of theta0 - theta_f.
inline constexpr double kTemperatureSlack = 1e-9;

double conductivity(const Material& mat, const BoundaryData& bd, double theta);
double specific_heat(const Material& mat, const BoundaryData& bd, double theta);

}  // namespace stefan
