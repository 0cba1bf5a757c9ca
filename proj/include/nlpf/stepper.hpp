#pragma once

#include "nlpf/elliptic.hpp"
#include "nlpf/problem.hpp"
#include "nlpf/scalar.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace nlpf {

/// Contraction factor ell^2 h^2 / (eps (1 + h - pi_lip h^2)) of S = B o A.
double kappa(double eps, double h, double ell, double pi_lip);

/// Largest h <= min{1, 1/pi_lip} with kappa(eps, h, ell, pi_lip) <= safety.
double max_step(double eps, double ell, double pi_lip, double safety);

struct StepperSettings {
  /// Stop the fixed-point loop once ||phi_{k+1} - phi_k||_H <= fp_rel_tol (1 + ||phi_n||_H).
  double fp_rel_tol = 1e-9;
  int fp_max_iter = 200;
  /// run() requires T/N <= max_step(..., kappa_safety).
  double kappa_safety = 0.5;
  EllipticSettings elliptic;
  ScalarSolveConfig scalar;
};

/// One time level. u = eps theta + ln theta is stored, not recomputed.
struct StepState {
  int n = 0;
  GridFunction theta;
  GridFunction phi;
  GridFunction v;
  GridFunction u;
};

struct StepReport {
  int n = 0;  ///< index of the level produced
  int fixed_point_iters = 0;
  double last_update_H = 0.0;
  /// max over k >= 1 of ||phi_{k+1} - phi_k|| / ||phi_k - phi_{k-1}||.
  double contraction_ratio_measured = 0.0;
  double kappa_theory = 0.0;
  std::vector<double> updates;
  int newton_iters = 0;
  /// ||eps theta + ln theta - eta h Delta theta - g_theta||_{V*} of the accepted level.
  double defect_eq1_vstar = 0.0;
  /// ||(1+h) phi + h^2 beta(phi) + h^2 pi(phi) - g_phi||_H of the accepted level.
  double defect_eq2_H = 0.0;
  double min_theta = 0.0;
};

struct Trajectory {
  std::shared_ptr<const ProblemData> problem;
  double h = 0.0;
  int N = 0;
  std::vector<StepState> states;      ///< levels 0..N
  std::vector<GridFunction> z;        ///< z[n] = (v_n - v_{n-1}) / h for n >= 1; z[0] is zero
  std::vector<GridFunction> f;        ///< f[n] = time average of f over ((n-1)h, nh]; f[0] is zero
  std::vector<StepReport> reports;    ///< reports[n-1] produced level n

  double T() const { return h * N; }
  const Grid& grid() const { return problem->grid(); }
};

class Stepper {
 public:
  Stepper(std::shared_ptr<const ProblemData> problem, StepperSettings settings = {});

  StepState initial_state() const;

  /// Advance one level with step h and source average f_slab.
  std::pair<StepState, StepReport> step(const StepState& prev, double h, const GridFunction& f_slab);

  /// Fixed-point map S = B o A for the step from `prev` (exposed for tests).
  GridFunction map_A(const StepState& prev, double h, const GridFunction& f_slab, const GridFunction& phi);
  GridFunction map_B(const StepState& prev, double h, const GridFunction& theta) const;

  const StepperSettings& settings() const { return settings_; }

 private:
  std::shared_ptr<const ProblemData> problem_;
  StepperSettings settings_;
  EllipticSolver elliptic_;
};

/// N steps of size T/N from the problem's initial data.
Trajectory run(const ProblemData& pd, int N, const StepperSettings& settings = {});
Trajectory run(std::shared_ptr<const ProblemData> pd, int N, const StepperSettings& settings = {});

}  // namespace nlpf
