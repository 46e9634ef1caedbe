#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "stefan/similarity.hpp"

/// Finite-difference moving-boundary solver used to verify similarity solutions.
///
/// The liquid region 0 < x < s(t) is mapped onto xi = x / s(t) in [0, 1]. With
/// u = (theta - theta_f)/(theta0 - theta_f), sigma = s^2 and f(u) = 1 + delta u^p,
///
///   sigma f(u) u_t = a^2 (f(u) u_xi)_xi + f(u) xi (sigma'/2) u_xi - sigma H / (rho c0 (theta0 - theta_f)),
///   sigma' = -2 a^2 Ste u_xi(1, t),
///
/// with u(0) = 1, u(1) = 0. Fluxes, capacity and convection are written as
/// differences of V = u + delta u^{p+1}/(p+1) (f(u) u_xi = V_xi), with secant
/// coefficients lagged in a Picard iteration, so the scheme stays second order
/// when u^p has a kink at the front (p < 1). Boundary gradients use three-point
/// one-sided stencils on V; time uses a weighted implicit scheme.
namespace stefan::oracle {

using similarity::SimilaritySolution;

struct OracleConfig {
  int n_space = 256;  // grid points on [0, 1]
  double t_start = 0.01;
  double t_end = 1.0;
  int n_time = 4096;
  double theta_scheme = 1.0;  // 1 = backward Euler, 0.5 = Crank-Nicolson
  double picard_tol = 1e-10;
  int picard_max_iter = 50;

  void validate() const;
};

struct OracleRun {
  std::string fingerprint;
  OracleConfig config;
  Eigen::VectorXd xi;      // grid nodes
  Eigen::VectorXd times;   // time levels actually stored
  Eigen::VectorXd front;   // s_num at each time level
  Eigen::MatrixXd fields;  // theta at (time level, node)
  double front_rel_err = 0.0;
  double temp_max_err = 0.0;  // K
  int max_picard_iterations = 0;
};

struct Comparison {
  double front_rel_err = 0.0;
  double temp_max_err = 0.0;
};

/// Run holding only the initial state at t_start, copied from the similarity solution.
OracleRun initialize(const SimilaritySolution& sol, const OracleConfig& cfg);

/// Marches from t_start to t_end and fills the error metrics against `sol`.
/// Throws NonConvergence when Picard iteration stalls and FrontCollapse when
/// the front stops advancing.
OracleRun run_oracle(const SimilaritySolution& sol, const OracleConfig& cfg);

/// Solves the similarity problem first, then runs the oracle.
OracleRun run_oracle(const Problem& problem, const OracleConfig& cfg,
                     const similarity::SolveOptions& options = {});

/// Max relative front deviation and max temperature deviation on the common
/// liquid region over all stored time levels. MismatchedProblem when the run
/// was produced for different parameters.
Comparison compare(const SimilaritySolution& sol, const OracleRun& run);

struct GridLevel {
  int n_space = 0;
  int n_time = 0;
  double front_end = 0.0;  // s_num(t_end)
  double front_rel_err = 0.0;
  double temp_max_err = 0.0;
};

struct GridStudy {
  std::vector<GridLevel> levels;
  /// Order q solving (s1 - s2)/(s2 - s3) = (h1^q - h2^q)/(h2^q - h3^q) on the last three levels.
  double self_convergence_order = 0.0;
  /// log(e_k / e_{k+1}) / log(h_k / h_{k+1}) for the front error of the last two levels.
  double error_order = 0.0;
};

/// Runs `n_levels` configurations, doubling n_space and n_time from `coarsest`.
GridStudy grid_study(const SimilaritySolution& sol, const OracleConfig& coarsest, int n_levels = 3);

}  // namespace stefan::oracle
