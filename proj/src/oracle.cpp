#include "stefan/oracle.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>

#include "stefan/reconstruct.hpp"

namespace stefan::oracle {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidInput, what);
}

/// Physical constants of one run, pre-reduced.
struct Coefficients {
  double a2 = 1.0;  // a^2
  double ste = 1.0;
  double delta = 1.0;
  double p = 1.0;
  double rho_c0 = 1.0;
  double span = 1.0;
  double theta_f = 0.0;
  double diffusivity = 1.0;  // a
  SourceSpec source;
};

class FrontFixingStepper {
 public:
  FrontFixingStepper(Coefficients coef, const OracleConfig& cfg)
      : coef_(std::move(coef)), cfg_(cfg), n_(cfg.n_space), h_(1.0 / (cfg.n_space - 1)) {
    xi_ = Eigen::VectorXd::LinSpaced(n_, 0.0, 1.0);
    matrix_.resize(n_ - 2, n_ - 2);
    std::vector<Eigen::Triplet<double>> pattern;
    for (int i = 0; i < n_ - 2; ++i) {
      for (int j = std::max(0, i - 1); j <= std::min(n_ - 3, i + 1); ++j) pattern.emplace_back(i, j, 1.0);
    }
    matrix_.setFromTriplets(pattern.begin(), pattern.end());
    matrix_.makeCompressed();
    lu_.analyzePattern(matrix_);
  }

  const Eigen::VectorXd& xi() const { return xi_; }

  /// Advances (u, sigma) from t to t + dt in place; returns Picard iterations used.
  int step(Eigen::VectorXd& u, double& sigma, double t, double dt) {
    const double theta = cfg_.theta_scheme;
    const Eigen::VectorXd v_old = kirchhoff(u);
    const double rate_old = sigma_rate(v_old);
    Eigen::VectorXd explicit_part = Eigen::VectorXd::Zero(n_);
    if (theta < 1.0) {
      explicit_part = (1.0 - theta) * operator_apply(v_old, sigma, rate_old, t);
    }

    Eigen::VectorXd iterate = u;
    double sigma_iter = sigma + dt * rate_old;
    const double t_new = t + dt;
    const double diff = coef_.a2 / (h_ * h_);
    for (int it = 1; it <= cfg_.picard_max_iter; ++it) {
      const Eigen::VectorXd v_it = kirchhoff(iterate);
      const double rate_it = sigma_rate(v_it);
      const double sigma_mid = theta * sigma_iter + (1.0 - theta) * sigma;
      const Eigen::VectorXd source_it = source(v_it, sigma_iter, t_new);

      // Interior rows j = 1 .. n-2 map to unknowns 0 .. n-3.
      Eigen::VectorXd rhs(n_ - 2);
      for (int j = 1; j <= n_ - 2; ++j) {
        const int row = j - 1;
        const double mass = sigma_mid * secant(iterate[j], u[j], v_it[j], v_old[j]) / dt;
        const double k_minus = secant(iterate[j], iterate[j - 1], v_it[j], v_it[j - 1]);
        const double k_plus = secant(iterate[j + 1], iterate[j], v_it[j + 1], v_it[j]);
        const double adv = xi_[j] * rate_it / (4.0 * h_);
        const double lower = -theta * k_minus * (diff - adv);
        const double upper = -theta * k_plus * (diff + adv);
        const double diag = mass + theta * (diff * (k_minus + k_plus) + adv * (k_plus - k_minus));
        rhs[row] = mass * u[j] + explicit_part[j] - theta * source_it[j];
        matrix_.coeffRef(row, row) = diag;
        if (j > 1) {
          matrix_.coeffRef(row, row - 1) = lower;
        } else {
          rhs[row] -= lower * u[0];
        }
        if (j < n_ - 2) {
          matrix_.coeffRef(row, row + 1) = upper;
        } else {
          rhs[row] -= upper * u[n_ - 1];
        }
      }
      lu_.factorize(matrix_);
      if (lu_.info() != Eigen::Success) {
        throw Error(ErrorCode::NonConvergence, "tridiagonal factorization failed");
      }
      const Eigen::VectorXd interior = lu_.solve(rhs);

      Eigen::VectorXd next = iterate;
      next.segment(1, n_ - 2) = interior;
      const double sigma_next = sigma + dt * (theta * sigma_rate(kirchhoff(next)) + (1.0 - theta) * rate_old);
      const double du = (next - iterate).cwiseAbs().maxCoeff();
      const double ds = std::abs(sigma_next - sigma_iter) / sigma_next;
      iterate = std::move(next);
      sigma_iter = sigma_next;
      if (du <= cfg_.picard_tol && ds <= cfg_.picard_tol) {
        if (!(sigma_iter > sigma)) {
          std::ostringstream msg;
          msg << "front stopped advancing at t = " << t_new;
          throw Error(ErrorCode::FrontCollapse, msg.str());
        }
        u = std::move(iterate);
        sigma = sigma_iter;
        return it;
      }
    }
    std::ostringstream msg;
    msg << "Picard iteration did not converge within " << cfg_.picard_max_iter
        << " iterations at t = " << t_new;
    throw Error(ErrorCode::NonConvergence, msg.str());
  }

 private:
  // V = u + delta u^{p+1}/(p+1), so that f(u) u_x = V_x. V stays smooth at the
  // front when u^p does not, and every flux below is a difference of V.
  Eigen::VectorXd kirchhoff(const Eigen::VectorXd& u) const {
    const Eigen::ArrayXd w = u.array().max(0.0);
    return (u.array() + coef_.delta / (coef_.p + 1.0) * w.pow(coef_.p + 1.0)).matrix();
  }

  double factor(double u) const { return 1.0 + coef_.delta * std::pow(std::max(u, 0.0), coef_.p); }

  // (V(a) - V(b)) / (a - b), or f at the midpoint when a and b coincide.
  double secant(double a, double b, double va, double vb) const {
    const double d = a - b;
    if (std::abs(d) <= 1e-12) return factor(0.5 * (a + b));
    return (va - vb) / d;
  }

  // Boundary gradients of V. Phi'(0) = 1 gives u_xi = V_xi at the front;
  // at the fixed face u_xi = V_xi / (1 + delta).
  double front_gradient(const Eigen::VectorXd& v) const {
    return (3.0 * v[n_ - 1] - 4.0 * v[n_ - 2] + v[n_ - 3]) / (2.0 * h_);
  }

  double face_gradient(const Eigen::VectorXd& v) const {
    return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h_) / (1.0 + coef_.delta);
  }

  // d(sigma)/dt from the Stefan condition.
  double sigma_rate(const Eigen::VectorXd& v) const { return -2.0 * coef_.a2 * coef_.ste * front_gradient(v); }

  // sigma H / (rho c0 (theta0 - theta_f)) at every node.
  Eigen::VectorXd source(const Eigen::VectorXd& v, double sigma, double t) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
    if (std::holds_alternative<NoSource>(coef_.source)) return out;
    if (const auto* fb = std::get_if<FluxFeedbackSource>(&coef_.source)) {
      const double value = fb->lambda0 * std::sqrt(sigma) * face_gradient(v) / (coef_.rho_c0 * std::sqrt(t));
      out.setConstant(value);
      return out;
    }
    const double s = std::sqrt(sigma);
    const double scale = 2.0 * coef_.diffusivity * std::sqrt(t);
    for (int j = 0; j < n_; ++j) {
      out[j] = sigma / (t * coef_.ste) * source_beta(coef_.source, xi_[j] * s / scale);
    }
    return out;
  }

  Eigen::VectorXd operator_apply(const Eigen::VectorXd& v, double sigma, double rate, double t) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
    const Eigen::VectorXd src = source(v, sigma, t);
    for (int j = 1; j <= n_ - 2; ++j) {
      out[j] = coef_.a2 / (h_ * h_) * (v[j + 1] - 2.0 * v[j] + v[j - 1]) +
               xi_[j] * 0.5 * rate * (v[j + 1] - v[j - 1]) / (2.0 * h_) - src[j];
    }
    return out;
  }

  Coefficients coef_;
  OracleConfig cfg_;
  int n_;
  double h_;
  Eigen::VectorXd xi_;
  Eigen::SparseMatrix<double> matrix_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

Coefficients coefficients_for(const SimilaritySolution& sol) {
  const Problem& prob = sol.problem();
  Coefficients c;
  c.diffusivity = sol.dimensionless().a;
  c.a2 = c.diffusivity * c.diffusivity;
  c.ste = sol.ste();
  c.delta = prob.material.delta;
  c.p = prob.material.p;
  c.rho_c0 = prob.material.rho * prob.material.c0;
  c.span = prob.boundary.span();
  c.theta_f = prob.boundary.theta_f;
  c.source = prob.source;
  return c;
}

}  // namespace

void OracleConfig::validate() const {
  require(n_space >= 16, "oracle.n_space must be >= 16");
  require(n_time >= 16, "oracle.n_time must be >= 16");
  require(t_start > 0.0 && t_start < t_end, "oracle requires 0 < t_start < t_end");
  require(theta_scheme >= 0.5 && theta_scheme <= 1.0, "oracle.theta_scheme must lie in [0.5, 1]");
  require(picard_tol > 0.0 && picard_max_iter >= 1, "Picard settings must be positive");
}

OracleRun initialize(const SimilaritySolution& sol, const OracleConfig& cfg) {
  cfg.validate();
  OracleRun run;
  run.fingerprint = fingerprint(sol.problem());
  run.config = cfg;
  run.xi = Eigen::VectorXd::LinSpaced(cfg.n_space, 0.0, 1.0);
  const double s0 = reconstruct::front_position(sol, cfg.t_start);
  run.times = Eigen::VectorXd::Constant(1, cfg.t_start);
  run.front = Eigen::VectorXd::Constant(1, s0);
  run.fields.resize(1, cfg.n_space);
  for (int j = 0; j < cfg.n_space; ++j) {
    run.fields(0, j) = reconstruct::temperature(sol, {run.xi[j] * s0, cfg.t_start});
  }
  return run;
}

OracleRun run_oracle(const SimilaritySolution& sol, const OracleConfig& cfg) {
  OracleRun run = initialize(sol, cfg);
  const Coefficients coef = coefficients_for(sol);
  FrontFixingStepper stepper(coef, cfg);

  const int levels = cfg.n_time + 1;
  run.times.resize(levels);
  run.front.resize(levels);
  const Eigen::RowVectorXd first = run.fields.row(0);
  run.fields.resize(levels, cfg.n_space);
  run.fields.row(0) = first;
  run.times[0] = cfg.t_start;
  run.front[0] = reconstruct::front_position(sol, cfg.t_start);

  Eigen::VectorXd u = ((first.transpose().array() - coef.theta_f) / coef.span).matrix();
  double sigma = run.front[0] * run.front[0];
  const double dt = (cfg.t_end - cfg.t_start) / cfg.n_time;
  for (int n = 0; n < cfg.n_time; ++n) {
    const double t = cfg.t_start + n * dt;
    const int iterations = stepper.step(u, sigma, t, dt);
    run.max_picard_iterations = std::max(run.max_picard_iterations, iterations);
    run.times[n + 1] = (n + 1 == cfg.n_time) ? cfg.t_end : cfg.t_start + (n + 1) * dt;
    run.front[n + 1] = std::sqrt(sigma);
    run.fields.row(n + 1) = (coef.theta_f + coef.span * u.array()).matrix().transpose();
  }

  const Comparison cmp = compare(sol, run);
  run.front_rel_err = cmp.front_rel_err;
  run.temp_max_err = cmp.temp_max_err;
  return run;
}

OracleRun run_oracle(const Problem& problem, const OracleConfig& cfg,
                     const similarity::SolveOptions& options) {
  return run_oracle(SimilaritySolution::solve(problem, options), cfg);
}

Comparison compare(const SimilaritySolution& sol, const OracleRun& run) {
  if (run.fingerprint != fingerprint(sol.problem())) {
    throw Error(ErrorCode::MismatchedProblem,
                "run [" + run.fingerprint + "] vs solution [" + fingerprint(sol.problem()) + "]");
  }
  Comparison out;
  for (Eigen::Index i = 0; i < run.times.size(); ++i) {
    const double t = run.times[i];
    const double s_exact = reconstruct::front_position(sol, t);
    const double s_num = run.front[i];
    out.front_rel_err = std::max(out.front_rel_err, std::abs(s_num - s_exact) / s_exact);
    const double common = std::min(s_num, s_exact);
    for (Eigen::Index j = 0; j < run.xi.size(); ++j) {
      const double x = run.xi[j] * s_num;
      if (x > common) break;
      const double exact = reconstruct::temperature(sol, {x, t});
      out.temp_max_err = std::max(out.temp_max_err, std::abs(run.fields(i, j) - exact));
    }
  }
  return out;
}

GridStudy grid_study(const SimilaritySolution& sol, const OracleConfig& coarsest, int n_levels) {
  require(n_levels >= 2, "grid study needs at least two levels");
  GridStudy study;
  OracleConfig cfg = coarsest;
  for (int k = 0; k < n_levels; ++k) {
    const OracleRun run = run_oracle(sol, cfg);
    study.levels.push_back({cfg.n_space, cfg.n_time, run.front[run.front.size() - 1], run.front_rel_err,
                            run.temp_max_err});
    cfg.n_space *= 2;
    cfg.n_time *= 2;
  }
  const auto spacing = [](const GridLevel& lvl) { return 1.0 / (lvl.n_space - 1); };
  const std::size_t last = study.levels.size() - 1;
  {
    const GridLevel& fine = study.levels[last];
    const GridLevel& coarse = study.levels[last - 1];
    study.error_order = std::log(coarse.front_rel_err / fine.front_rel_err) /
                        std::log(spacing(coarse) / spacing(fine));
  }
  if (study.levels.size() >= 3) {
    const GridLevel& l1 = study.levels[last - 2];
    const GridLevel& l2 = study.levels[last - 1];
    const GridLevel& l3 = study.levels[last];
    const double h1 = spacing(l1), h2 = spacing(l2), h3 = spacing(l3);
    const double observed = (l1.front_end - l2.front_end) / (l2.front_end - l3.front_end);
    const auto model_ratio = [=](double q) {
      return (std::pow(h1, q) - std::pow(h2, q)) / (std::pow(h2, q) - std::pow(h3, q));
    };
    if (std::isfinite(observed) && observed > model_ratio(1e-6)) {
      study.self_convergence_order =
          numerics::find_root_increasing(model_ratio, observed, {1e-6, 1.0}, {1e-10, 1e-10, 200});
    }
  }
  return study;
}

}  // namespace stefan::oracle
