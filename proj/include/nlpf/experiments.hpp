#pragma once

#include "nlpf/stepper.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace nlpf {

/// Distances between two trajectories on the same grid and horizon.
struct PairMetrics {
  double phi_hat_CH = 0.0;      ///< sup_t ||phi_hat_a - phi_hat_b||_H
  double v_hat_CH = 0.0;        ///< sup_t ||v_hat_a - v_hat_b||_H
  double v_bar_L2H = 0.0;       ///< ||v_bar_a - v_bar_b||_{L2(0,T;H)}
  double v_hat_L2Vstar = 0.0;   ///< ||v_hat_a - v_hat_b||_{L2(0,T;V*)}
};

/// Exact metrics over the merged breakpoints of both trajectories. Hat
/// differences are affine and bar differences constant between merged
/// breakpoints, so every quantity is evaluated without sampling error.
PairMetrics pair_metrics(const Trajectory& a, const Trajectory& b);

struct RateFit {
  bool exact = false;  ///< every metric was zero; slope and constant are not fitted
  double slope = 0.0;
  double log_constant = 0.0;
  double residual = 0.0;  ///< sqrt of the sum of squared log residuals
};

/// OLS of log(metric) against log(h). Needs at least 3 points
/// (InsufficientLevels); a nonpositive metric among positive ones throws
/// DegenerateFit.
RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& metric);

struct StudyRow {
  double a = 0.0;  ///< h (or eps) of the coarser member
  double b = 0.0;  ///< h (or eps) of the finer member
  double h_a = 0.0;
  double h_b = 0.0;
  PairMetrics metrics;
  double lhs = 0.0;    ///< phi_hat_CH + v_hat_CH + v_bar_L2H
  double shape = 0.0;  ///< right side divided by C
  double bound = 0.0;  ///< fitted C times shape
  bool holds = false;
};

/// Quantities bounded uniformly in eps, one set per member.
struct UniformQuantities {
  double eps = 0.0;
  double sqrt_eps_theta_LinfH = 0.0;
  double theta_L2V = 0.0;
  double log_theta_LinfH = 0.0;
  double phi_W22 = 0.0;
  double phi_W1inf = 0.0;
};

struct CauchyStudy {
  std::string kind;  ///< "h" or "eps"
  std::vector<StudyRow> rows;
  double fitted_C = 0.0;
  bool inequality_holds = false;
  /// Log-log slope of the phi C(H) metric against the coarser parameter;
  /// only fitted with at least 3 pairs.
  bool slope_fitted = false;
  RateFit phi_rate;
  std::vector<UniformQuantities> uniform;
  /// max over quantities of max_k Q_k / Q_0 (eps study only).
  double uniform_growth = 0.0;
};

UniformQuantities uniform_quantities(const Trajectory& traj);

/// h_list must be decreasing with T/h integral and each h a multiple of the
/// next. Fewer than 3 entries throws InsufficientLevels.
CauchyStudy cauchy_in_h(std::shared_ptr<const ProblemData> pd, const std::vector<double>& h_list,
                        const StepperSettings& settings = {});

/// Step rule used by the eps study.
struct StepRule {
  double safety = 0.25;
  double h_base = 1.0;
  /// min(max_step(eps, safety), h_base eps), shrunk so that T/h is an integer.
  int steps(const ProblemData& pd, double eps) const;
};

/// eps_list must be decreasing. A single member yields no pair rows.
CauchyStudy cauchy_in_eps(std::shared_ptr<const ProblemData> pd, const std::vector<double>& eps_list,
                          const StepRule& rule = {}, const StepperSettings& settings = {});

}  // namespace nlpf
