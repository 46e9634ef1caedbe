#include "stefan/errata.hpp"

#include <cmath>

namespace stefan::errata {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

similarity::PsiProfile psi_source1_flipped_sign(double lambda, double ste, double delta, double p,
                                                ScalarFn beta) {
  const auto& quad = similarity::kQuadratureTol;
  const double top = similarity::lambda_target(delta, p);
  const auto beta_exp = [beta](double z) { return beta(z) * std::exp(z * z); };
  const double coeff = kSqrtPi / ste *
                       (2.0 * numerics::integrate(beta_exp, 0.0, lambda, quad) -
                        lambda * std::exp(lambda * lambda));
  return {[=](double eta) {
            const double e = numerics::erf(eta);
            const double inner = numerics::integrate(
                [&](double z) { return beta_exp(z) * (e - numerics::erf(z)); }, 0.0, eta, quad);
            return top - coeff * e + 2.0 * kSqrtPi / ste * inner;
          },
          lambda, top};
}

similarity::LambdaEquation lambda_equation_exponential_misderived(double ste, double delta, double p) {
  return {[ste](double x) {
            const double x2 = x * x;
            return -std::expm1(-x2) / ste + kSqrtPi / ste * x * numerics::erf(x) * std::expm1(x2);
          },
          similarity::lambda_target(delta, p)};
}

similarity::PsiProfile psi_exponential_misderived(double lambda, double ste, double delta, double p) {
  const double top = similarity::lambda_target(delta, p);
  return {[=](double eta) {
            return top + std::expm1(-eta * eta) / ste -
                   kSqrtPi / ste * lambda * numerics::erf(eta) * std::expm1(lambda * lambda);
          },
          lambda, top};
}

double y_prime0_source1_doubled(double lambda, double ste, double delta, const ScalarFn& beta) {
  return 2.0 * similarity::y_prime0_source1(lambda, ste, delta, beta);
}

}  // namespace stefan::errata
