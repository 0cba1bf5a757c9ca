#include "nlpf/elliptic.hpp"

#include "nlpf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlpf {

namespace {

// s = ln r with e^s + tau s = x. Newton from an upper bound decreases
// monotonically to the root because the map is convex and increasing.
double resolvent_log(double x, double tau) {
  double s = std::min(x / tau, x > 1.0 ? std::log(x) : 0.0);
  for (int it = 0; it < 200; ++it) {
    const double es = std::exp(s);
    const double f = es + tau * s - x;
    if (f <= 0.0) break;
    const double ds = f / (es + tau);
    s -= ds;
    if (ds <= 1e-16 * std::max(1.0, std::abs(s))) break;
  }
  return s;
}

}  // namespace

double yosida_ln(double x, double tau) { return resolvent_log(x, tau); }

double yosida_ln_prime(double x, double tau) { return 1.0 / (std::exp(resolvent_log(x, tau)) + tau); }

std::vector<double> tau_schedule(const EllipticSettings& settings) {
  std::vector<double> out;
  for (double tau = settings.tau_start; tau >= settings.tau_min * (1.0 - 1e-12); tau /= settings.tau_factor)
    out.push_back(tau);
  if (out.empty() || out.back() > settings.tau_min) out.push_back(settings.tau_min);
  return out;
}

EllipticSolver::EllipticSolver(const Grid& grid, const NeumannLaplacian& laplacian, EllipticSettings settings)
    : grid_(grid), laplacian_(laplacian), settings_(settings) {}

GridFunction EllipticSolver::residual(const GridFunction& theta, const GridFunction& g, double eps, double eta,
                                      double h) const {
  return eps * theta + theta.array().log().matrix() - eta * h * laplacian_.apply(theta) - g;
}

namespace {

struct NewtonOutcome {
  bool ok = false;
  int iterations = 0;
  double residual = 0.0;
};

// Damped Newton for eps theta + nl(theta) - eta_h Delta theta = g, working
// with the weighted (symmetric) Jacobian W diag(eps + nl') + eta_h K.
template <class Value, class Deriv>
NewtonOutcome damped_newton(const Grid& grid, const NeumannLaplacian& lap, const EllipticSettings& st,
                            SparseMatrix& jac, Eigen::SimplicialLDLT<SparseMatrix>& factor, bool& pattern_ready,
                            const GridFunction& g, double eps, double eta_h, GridFunction& theta, Value value,
                            Deriv deriv, bool guard_positive) {
  const GridFunction& w = grid.cell_volumes();
  const auto n = theta.size();
  auto nodal_residual = [&](const GridFunction& th) {
    GridFunction f(n);
    for (Eigen::Index i = 0; i < n; ++i) f[i] = eps * th[i] + value(th[i]) - g[i];
    f -= eta_h * lap.apply(th);
    return f;
  };
  auto hnorm = [&](const GridFunction& f) { return std::sqrt((w.array() * f.array().square()).sum()); };

  const double tol = st.rel_tol * (1.0 + hnorm(g));
  GridFunction f = nodal_residual(theta);
  double r = hnorm(f);
  NewtonOutcome out;
  int polish = 0;
  for (int it = 0; it < st.max_newton; ++it) {
    if (!std::isfinite(r)) break;
    if (r == 0.0) break;
    if (r <= tol && polish >= 3) break;

    GridFunction diag(n);
    for (Eigen::Index i = 0; i < n; ++i) diag[i] = w[i] * (eps + deriv(theta[i]));
    jac = eta_h * lap.stiffness();
    jac.diagonal() += diag;
    if (!pattern_ready) {
      factor.analyzePattern(jac);
      pattern_ready = true;
    }
    factor.factorize(jac);
    if (factor.info() != Eigen::Success) break;
    const GridFunction delta = factor.solve(-w.cwiseProduct(f));
    ++out.iterations;

    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k <= st.max_halvings; ++k, alpha *= 0.5) {
      GridFunction cand = theta + alpha * delta;
      if (guard_positive) {
        bool ok = true;
        for (Eigen::Index i = 0; i < n; ++i)
          if (!(cand[i] >= st.positivity_fraction * theta[i])) {
            ok = false;
            break;
          }
        if (!ok) continue;
      }
      GridFunction fc = nodal_residual(cand);
      const double rc = hnorm(fc);
      const bool decrease = r > tol ? rc <= (1.0 - 1e-4 * alpha) * r : rc < 0.5 * r;
      if (decrease) {
        theta = std::move(cand);
        f = std::move(fc);
        r = rc;
        accepted = true;
        break;
      }
      if (r <= tol) break;  // already converged; no progress left to make
    }
    if (!accepted) break;
    if (r <= tol) ++polish;
  }
  out.residual = r;
  out.ok = std::isfinite(r) && r <= tol;
  return out;
}

}  // namespace

GridFunction EllipticSolver::solve_regularized(const GridFunction& g, double eps, double eta, double h, double tau,
                                               const GridFunction* guess, int* iterations) {
  GridFunction theta = guess ? *guess : grid_.constant(1.0);
  const auto outcome = damped_newton(
      grid_, laplacian_, settings_, jacobian_, factor_, pattern_ready_, g, eps, eta * h, theta,
      [tau](double x) { return yosida_ln(x, tau); }, [tau](double x) { return yosida_ln_prime(x, tau); }, false);
  if (iterations) *iterations += outcome.iterations;
  if (!outcome.ok) throw NoConvergence("elliptic (regularized)", outcome.iterations, outcome.residual);
  return theta;
}

std::optional<GridFunction> EllipticSolver::newton_exact(const GridFunction& g, double eps, double eta_h,
                                                         GridFunction theta, int& iterations, double& residual) {
  const auto outcome = damped_newton(
      grid_, laplacian_, settings_, jacobian_, factor_, pattern_ready_, g, eps, eta_h, theta,
      [](double x) { return std::log(x); }, [](double x) { return 1.0 / x; }, true);
  iterations += outcome.iterations;
  residual = outcome.residual;
  if (!outcome.ok) return std::nullopt;
  return theta;
}

EllipticSolveReport EllipticSolver::solve(const GridFunction& g, double eps, double eta, double h,
                                          const std::vector<double>& schedule, const GridFunction* guess) {
  EllipticSolveReport rep;
  GridFunction theta = guess ? *guess : grid_.constant(1.0);
  for (double tau : schedule) {
    theta = solve_regularized(g, eps, eta, h, tau, &theta, &rep.newton_iters_total);
    rep.tau_final = tau;
  }
  // Start the unregularized Newton from the resolvent J_tau(theta) > 0,
  // which satisfies ln J_tau(theta) = ln_tau(theta).
  const double tau = schedule.empty() ? settings_.tau_min : schedule.back();
  GridFunction start(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) start[i] = std::exp(yosida_ln(theta[i], tau));
  double r = 0.0;
  auto exact = newton_exact(g, eps, eta * h, start, rep.newton_iters_total, r);
  if (!exact) throw NoConvergence("elliptic", rep.newton_iters_total, r);
  rep.theta = std::move(*exact);
  rep.residual_H = norm_H(grid_, residual(rep.theta, g, eps, eta, h));
  rep.min_theta = rep.theta.minCoeff();
  return rep;
}

EllipticSolveReport EllipticSolver::solve(const GridFunction& g, double eps, double eta, double h) {
  return solve(g, eps, eta, h, tau_schedule(settings_));
}

EllipticSolveReport EllipticSolver::solve_from(const GridFunction& g, double eps, double eta, double h,
                                               const GridFunction& positive_guess) {
  if (positive_guess.size() == g.size() && positive_guess.minCoeff() > 0.0) {
    EllipticSolveReport rep;
    double r = 0.0;
    auto exact = newton_exact(g, eps, eta * h, positive_guess, rep.newton_iters_total, r);
    if (exact) {
      rep.theta = std::move(*exact);
      rep.tau_final = 0.0;
      rep.residual_H = norm_H(grid_, residual(rep.theta, g, eps, eta, h));
      rep.min_theta = rep.theta.minCoeff();
      return rep;
    }
  }
  return solve(g, eps, eta, h);
}

GridFunction solve_regularized(const Grid& grid, const GridFunction& g, double eps, double eta, double h,
                               double tau) {
  NeumannLaplacian lap(grid);
  EllipticSolver solver(grid, lap);
  return solver.solve_regularized(g, eps, eta, h, tau);
}

EllipticSolveReport solve_elliptic(const Grid& grid, const GridFunction& g, double eps, double eta, double h,
                                   const std::vector<double>& schedule) {
  NeumannLaplacian lap(grid);
  EllipticSolver solver(grid, lap);
  return solver.solve(g, eps, eta, h, schedule);
}

}  // namespace nlpf
