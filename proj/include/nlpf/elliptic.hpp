#pragma once

#include "nlpf/grid.hpp"
#include "nlpf/laplacian.hpp"

#include <optional>
#include <vector>

namespace nlpf {

/// Yosida approximation of ln at x: (x - r)/tau where r > 0 solves
/// r + tau ln r = x. Since x - r = tau ln r, the value is ln r, which is how
/// it is evaluated. Defined for every real x.
double yosida_ln(double x, double tau);
/// Derivative 1/(r + tau); bounded by 1/tau.
double yosida_ln_prime(double x, double tau);

struct EllipticSettings {
  /// Accept when ||F||_H <= rel_tol * (1 + ||g||_H).
  double rel_tol = 1e-10;
  int max_newton = 200;
  int max_halvings = 60;
  /// Nodewise positivity guard for the unregularized solve: a damped step
  /// must keep theta_i >= positivity_fraction * theta_i(previous).
  double positivity_fraction = 0.1;
  /// Continuation tau_k = tau_start * tau_factor^{-k} down to tau_min.
  double tau_start = 0.1;
  double tau_factor = 4.0;
  double tau_min = 1e-10;
};

std::vector<double> tau_schedule(const EllipticSettings& settings);

struct EllipticSolveReport {
  GridFunction theta;
  double tau_final = 0.0;
  int newton_iters_total = 0;
  /// ||eps theta + ln theta - eta h Delta theta - g||_H of the returned theta.
  double residual_H = 0.0;
  double min_theta = 0.0;
};

/// Newton solver for eps theta + ln(theta) - eta h Delta_h theta = g and its
/// Yosida-regularized version. Holds scratch state; use one per thread.
class EllipticSolver {
 public:
  EllipticSolver(const Grid& grid, const NeumannLaplacian& laplacian, EllipticSettings settings = {});

  const EllipticSettings& settings() const { return settings_; }

  /// eps theta + ln_tau(theta) - eta h Delta theta = g.
  GridFunction solve_regularized(const GridFunction& g, double eps, double eta, double h, double tau,
                                 const GridFunction* guess = nullptr, int* iterations = nullptr);

  /// tau-continuation over `schedule` (warm-started) followed by Newton on
  /// the unregularized equation from the resolvent of the last iterate.
  EllipticSolveReport solve(const GridFunction& g, double eps, double eta, double h,
                            const std::vector<double>& schedule, const GridFunction* guess = nullptr);
  EllipticSolveReport solve(const GridFunction& g, double eps, double eta, double h);

  /// Unregularized Newton from a strictly positive guess; falls back to the
  /// continuation path if it fails.
  EllipticSolveReport solve_from(const GridFunction& g, double eps, double eta, double h,
                                 const GridFunction& positive_guess);

  /// Nodal residual eps theta + ln theta - eta h Delta theta - g.
  GridFunction residual(const GridFunction& theta, const GridFunction& g, double eps, double eta, double h) const;

 private:
  std::optional<GridFunction> newton_exact(const GridFunction& g, double eps, double eta_h, GridFunction theta,
                                           int& iterations, double& residual);

  Grid grid_;
  const NeumannLaplacian& laplacian_;
  EllipticSettings settings_;
  SparseMatrix jacobian_;
  Eigen::SimplicialLDLT<SparseMatrix> factor_;
  bool pattern_ready_ = false;
};

/// Free-function forms of the solver for one-off use.
GridFunction solve_regularized(const Grid& grid, const GridFunction& g, double eps, double eta, double h, double tau);
EllipticSolveReport solve_elliptic(const Grid& grid, const GridFunction& g, double eps, double eta, double h,
                                   const std::vector<double>& schedule);

}  // namespace nlpf
