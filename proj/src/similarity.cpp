#include "stefan/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace stefan::similarity {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kPsiSlack = 1e-9;
constexpr double kPhiSlack = 1e-9;

using numerics::erf;
using numerics::integrate;

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw Error(ErrorCode::InvalidInput, std::string(name) + " must be > 0");
  }
}

void check_parameters(double ste, double delta, double p) {
  require_positive(ste, "Ste");
  require_positive(delta, "delta");
  require_positive(p, "p");
}

// int_0^x exp(z^2) dz
double exp_sq_integral(double x, const Tolerance& quad) {
  return integrate([](double z) { return std::exp(z * z); }, 0.0, x, quad);
}

// int_0^x exp(z^2) erf(z) dz
double exp_sq_erf_integral(double x, const Tolerance& quad) {
  return integrate([](double z) { return std::exp(z * z) * erf(z); }, 0.0, x, quad);
}

// int_0^x beta(z) exp(z^2) dz and int_0^x beta(z) exp(z^2) erf(z) dz
double beta_integral(const ScalarFn& beta, double x, const Tolerance& quad) {
  return integrate([&](double z) { return beta(z) * std::exp(z * z); }, 0.0, x, quad);
}

double beta_erf_integral(const ScalarFn& beta, double x, const Tolerance& quad) {
  return integrate([&](double z) { return beta(z) * std::exp(z * z) * erf(z); }, 0.0, x, quad);
}

}  // namespace

double lambda_target(double delta, double p) { return 1.0 + delta / (p + 1.0); }

double phi_map(double delta, double p, double x) {
  if (x < -kPhiSlack || x > 1.0 + kPhiSlack) {
    std::ostringstream msg;
    msg << "Phi argument " << x << " outside [0, 1]";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
  x = std::clamp(x, 0.0, 1.0);
  return x + delta / (p + 1.0) * std::pow(x, p + 1.0);
}

double phi_inverse(double delta, double p, double w, const Tolerance& tol) {
  const auto F = [=](double x) { return x + delta / (p + 1.0) * std::pow(x, p + 1.0); };
  const auto dF = [=](double x) { return 1.0 + delta * std::pow(x, p); };
  return numerics::invert_increasing(F, dF, w, {0.0, 1.0}, tol);
}

double phi_inverse_p1(double delta, double w) {
  // Rationalized form of (sqrt(1 + 2 delta w) - 1) / delta avoids cancellation for small delta.
  return 2.0 * w / (1.0 + std::sqrt(1.0 + 2.0 * delta * w));
}

double y_from_psi(double delta, double p, double psi_value) {
  const double top = lambda_target(delta, p);
  if (psi_value < -kPsiSlack || psi_value > top + kPsiSlack) {
    std::ostringstream msg;
    msg << "Psi value " << psi_value << " outside [0, " << top << "]";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
  return phi_inverse(delta, p, std::clamp(psi_value, 0.0, top));
}

LambdaEquation lambda_equation_no_source(double ste, double delta, double p) {
  check_parameters(ste, delta, p);
  return {[ste](double x) { return kSqrtPi / ste * x * erf(x) * std::exp(x * x); },
          lambda_target(delta, p)};
}

LambdaEquation lambda_equation_source1(double ste, double delta, double p, ScalarFn beta,
                                       const Tolerance& quad) {
  check_parameters(ste, delta, p);
  return {[ste, beta = std::move(beta), quad](double x) {
            return kSqrtPi / ste * x * erf(x) * std::exp(x * x) +
                   2.0 * kSqrtPi / ste * beta_erf_integral(beta, x, quad);
          },
          lambda_target(delta, p)};
}

LambdaEquation lambda_equation_exponential(double ste, double delta, double p) {
  check_parameters(ste, delta, p);
  return {[ste](double x) {
            const double x2 = x * x;
            return kSqrtPi / ste * x * erf(x) * (std::exp(x2) + 1.0) + std::expm1(-x2) / ste;
          },
          lambda_target(delta, p)};
}

LambdaEquation lambda_equation_source2(double ste, double delta, double p, double A,
                                       const Tolerance& quad) {
  check_parameters(ste, delta, p);
  require_positive(A, "A");
  return {[=](double x) {
            const double E = exp_sq_integral(x, quad);
            const double G = exp_sq_erf_integral(x, quad);
            const double ex = erf(x);
            return kSqrtPi * x * std::exp(x * x) / (ste * (A * E + 1.0 + delta)) *
                   (A * (ex * E - G) + (1.0 + delta) * ex);
          },
          lambda_target(delta, p)};
}

double solve_lambda(const LambdaEquation& eq, const Tolerance& tol) {
  return numerics::find_root_increasing(eq.evaluate, eq.target, {1e-8, 1.0}, tol);
}

double solve_lambda_source1(double ste, double delta, double p, ScalarFn beta, const Tolerance& tol) {
  return solve_lambda(lambda_equation_source1(ste, delta, p, std::move(beta)), tol);
}

double solve_lambda_source2(double ste, double delta, double p, double A, const Tolerance& tol) {
  return solve_lambda(lambda_equation_source2(ste, delta, p, A), tol);
}

PsiProfile psi_no_source(double lambda, double ste, double delta, double p) {
  check_parameters(ste, delta, p);
  const double top = lambda_target(delta, p);
  const double slope = kSqrtPi / ste * lambda * std::exp(lambda * lambda);
  return {[=](double eta) { return top - slope * erf(eta); }, lambda, top};
}

PsiProfile psi_source1(double lambda, double ste, double delta, double p, ScalarFn beta,
                       const Tolerance& quad) {
  check_parameters(ste, delta, p);
  const double top = lambda_target(delta, p);
  const double coeff =
      kSqrtPi / ste * (2.0 * beta_integral(beta, lambda, quad) + lambda * std::exp(lambda * lambda));
  return {[=, beta = std::move(beta)](double eta) {
            const double e = erf(eta);
            const double inner = e * beta_integral(beta, eta, quad) - beta_erf_integral(beta, eta, quad);
            return top - coeff * e + 2.0 * kSqrtPi / ste * inner;
          },
          lambda, top};
}

PsiProfile psi_exponential(double lambda, double ste, double delta, double p) {
  check_parameters(ste, delta, p);
  const double top = lambda_target(delta, p);
  const double coeff = kSqrtPi / ste * lambda * (std::exp(lambda * lambda) + 1.0);
  return {[=](double eta) { return top - coeff * erf(eta) - std::expm1(-eta * eta) / ste; }, lambda,
          top};
}

PsiProfile psi_source2(double lambda, double ste, double delta, double p, double A,
                       const Tolerance& quad) {
  check_parameters(ste, delta, p);
  require_positive(A, "A");
  const double top = lambda_target(delta, p);
  const double coeff = kSqrtPi * lambda * std::exp(lambda * lambda) /
                       (ste * (A * exp_sq_integral(lambda, quad) + 1.0 + delta));
  return {[=](double eta) {
            const double e = erf(eta);
            const double nested = e * exp_sq_integral(eta, quad) - exp_sq_erf_integral(eta, quad);
            return top - coeff * (A * nested + (1.0 + delta) * e);
          },
          lambda, top};
}

namespace {

double checked_profile_eta(double lambda, double eta) {
  if (eta < 0.0 || eta > lambda * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "eta = " << eta << " outside [0, " << lambda << "]";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
  return std::min(eta, lambda);
}

}  // namespace

double y_profile_source1(double lambda, double ste, double delta, double p, const ScalarFn& beta,
                         double eta) {
  eta = checked_profile_eta(lambda, eta);
  return y_from_psi(delta, p, psi_source1(lambda, ste, delta, p, beta).evaluate(eta));
}

double y_profile_source2(double lambda, double ste, double delta, double p, double A, double eta) {
  eta = checked_profile_eta(lambda, eta);
  return y_from_psi(delta, p, psi_source2(lambda, ste, delta, p, A).evaluate(eta));
}

double y_prime0_source1(double lambda, double ste, double delta, const ScalarFn& beta,
                        const Tolerance& quad) {
  return -2.0 / (ste * (1.0 + delta)) *
         (lambda * std::exp(lambda * lambda) + 2.0 * beta_integral(beta, lambda, quad));
}

double y_prime0_exponential(double lambda, double ste, double delta) {
  return -2.0 / (ste * (1.0 + delta)) * lambda * (std::exp(lambda * lambda) + 1.0);
}

double y_prime0_no_source(double lambda, double ste, double delta) {
  return -2.0 / (ste * (1.0 + delta)) * lambda * std::exp(lambda * lambda);
}

double y_prime0_source2(double lambda, double ste, double delta, double A, const Tolerance& quad) {
  return -2.0 * lambda * std::exp(lambda * lambda) /
         (ste * (A * exp_sq_integral(lambda, quad) + 1.0 + delta));
}

double ExponentialCase::y(double eta) const {
  eta = checked_profile_eta(lambda, eta);
  return y_from_psi(delta, p, psi.evaluate(eta));
}

ExponentialCase solve_exponential_case(double ste, double delta, double p, const Tolerance& tol) {
  const double lambda = solve_lambda(lambda_equation_exponential(ste, delta, p), tol);
  return {lambda, delta, p, psi_exponential(lambda, ste, delta, p)};
}

// ---------------------------------------------------------------------------

struct SimilaritySolution::State {
  Problem problem;
  Dimensionless dimensionless;
  double lambda = 0.0;
  double y_prime0 = 0.0;
  LambdaEquation equation;
  PsiProfile psi;
  ScalarFn rhs;
  numerics::ChebyshevInterpolant table;
};

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

LambdaEquation equation_for(const Problem& problem, const Dimensionless& dim,
                            const SolveOptions& opt) {
  const double delta = problem.material.delta;
  const double p = problem.material.p;
  return std::visit(
      overloaded{
          [&](const SimilaritySource& s) {
            return lambda_equation_source1(dim.ste, delta, p, s.beta, opt.quadrature);
          },
          [&](const ExponentialSource&) {
            if (opt.exponential_closed_form) return lambda_equation_exponential(dim.ste, delta, p);
            return lambda_equation_source1(
                dim.ste, delta, p, [](double eta) { return 0.5 * std::exp(-eta * eta); },
                opt.quadrature);
          },
          [&](const FluxFeedbackSource&) {
            return lambda_equation_source2(dim.ste, delta, p, *dim.A, opt.quadrature);
          },
          [&](const NoSource&) { return lambda_equation_no_source(dim.ste, delta, p); },
      },
      problem.source);
}

}  // namespace

SimilaritySolution SimilaritySolution::solve(const Problem& problem, const SolveOptions& options) {
  const Dimensionless dim = problem.dimensionless();
  const double lambda = solve_lambda(equation_for(problem, dim, options), options.root);
  return assemble(problem, lambda, options);
}

SimilaritySolution SimilaritySolution::assemble(const Problem& problem, double lambda,
                                                const SolveOptions& options) {
  require_positive(lambda, "lambda");
  auto state = std::make_shared<State>();
  state->problem = problem;
  state->dimensionless = problem.dimensionless();
  state->lambda = lambda;
  state->equation = equation_for(problem, state->dimensionless, options);

  const double ste = state->dimensionless.ste;
  const double delta = problem.material.delta;
  const double p = problem.material.p;
  const Tolerance& quad = options.quadrature;

  std::visit(
      overloaded{
          [&](const SimilaritySource& s) {
            state->psi = psi_source1(lambda, ste, delta, p, s.beta, quad);
            state->y_prime0 = y_prime0_source1(lambda, ste, delta, s.beta, quad);
            state->rhs = [beta = s.beta, ste](double eta) { return 4.0 / ste * beta(eta); };
          },
          [&](const ExponentialSource&) {
            const ScalarFn beta = [](double eta) { return 0.5 * std::exp(-eta * eta); };
            if (options.exponential_closed_form) {
              state->psi = psi_exponential(lambda, ste, delta, p);
              state->y_prime0 = y_prime0_exponential(lambda, ste, delta);
            } else {
              state->psi = psi_source1(lambda, ste, delta, p, beta, quad);
              state->y_prime0 = y_prime0_source1(lambda, ste, delta, beta, quad);
            }
            state->rhs = [ste](double eta) { return 2.0 / ste * std::exp(-eta * eta); };
          },
          [&](const FluxFeedbackSource&) {
            const double A = *state->dimensionless.A;
            state->psi = psi_source2(lambda, ste, delta, p, A, quad);
            state->y_prime0 = y_prime0_source2(lambda, ste, delta, A, quad);
            state->rhs = [rhs = A * state->y_prime0](double) { return rhs; };
          },
          [&](const NoSource&) {
            state->psi = psi_no_source(lambda, ste, delta, p);
            state->y_prime0 = y_prime0_no_source(lambda, ste, delta);
            state->rhs = [](double) { return 0.0; };
          },
      },
      problem.source);

  state->table = numerics::ChebyshevInterpolant(state->psi.evaluate, 0.0, lambda, options.table_size);
  return SimilaritySolution(std::move(state));
}

double SimilaritySolution::lambda() const { return state_->lambda; }
double SimilaritySolution::y_prime0() const { return state_->y_prime0; }
double SimilaritySolution::ste() const { return state_->dimensionless.ste; }
double SimilaritySolution::delta() const { return state_->problem.material.delta; }
double SimilaritySolution::p() const { return state_->problem.material.p; }
double SimilaritySolution::target() const { return state_->equation.target; }
const Dimensionless& SimilaritySolution::dimensionless() const { return state_->dimensionless; }
const Problem& SimilaritySolution::problem() const { return state_->problem; }
const LambdaEquation& SimilaritySolution::lambda_equation() const { return state_->equation; }

double SimilaritySolution::lambda_residual() const { return state_->equation.residual(state_->lambda); }

double SimilaritySolution::checked_eta(double eta) const { return checked_profile_eta(lambda(), eta); }

double SimilaritySolution::psi(double eta) const { return state_->psi.evaluate(checked_eta(eta)); }

double SimilaritySolution::y(double eta) const { return y_from_psi(delta(), p(), psi(eta)); }

double SimilaritySolution::y_interpolated(double eta) const {
  return y_from_psi(delta(), p(), state_->table(checked_eta(eta)));
}

double SimilaritySolution::ode_rhs(double eta) const { return state_->rhs(eta); }

}  // namespace stefan::similarity
