#pragma once

#include "nlpf/stepper.hpp"

#include <vector>

namespace nlpf {

/// Energy balance terms at level m together with three right-hand sides.
///
/// Testing the heat equation by h theta_{n+1}, the order-parameter equation
/// by h v_{n+1}, and using v_{n+1} = (phi_{n+1} - phi_n)/h gives the exact
/// balance
///
///   E_{n+1} - E_n + eta h |grad theta_{n+1}|^2 + D_n
///     = h (f_{n+1}, theta_{n+1}) - h (N phi_n + pi(phi_{n+1}), v_{n+1})
///       + h (v_{n+1}, phi_{n+1}) - h |v_{n+1}|^2
///
/// with E = (eps/2)|theta|^2 + int theta + |phi|^2/2 + |v|^2/2 + int beta_hat(phi),
/// N phi = a phi - J*phi, and D_n >= 0 collecting the increment squares, the
/// entropy defect and the beta_hat convexity defect. Summing over n < m:
///
///  - rhs_balance: E_0 plus the summed right side (trajectory values).
///  - rhs_split: each product bounded with explicit constants, K the kernel
///    bound and p = Lip(pi):
///      (f, theta)      <= |f|_inf int theta                (theta > 0)
///      |(N phi_n, v)|  <= K (|phi_n|^2 + |v|^2)             (|N phi| <= 2K|phi|)
///      |(pi(phi), v)|  <= pi(0)^2 |Omega|/2 + |v|^2/2 + (p/2)(|phi|^2 + |v|^2)
///      (v, phi)        <= (|v|^2 + |phi|^2)/2
///  - rhs_gronwall: rhs_split closed with int theta_j <= L_j, |phi_j|^2 <= 2 L_j,
///    |v_j|^2 <= 2 L_j and solved recursively,
///      G_0 = L_0,
///      G_m = [G_0 (1 + 2hK) + h m c0 + h sum_{j=1}^{m-1} (b_j + 2K) G_j] / (1 - h b_m),
///    with c0 = pi(0)^2 |Omega| / 2 and b_j = |f_j|_inf + 2K + 2p + 1. It depends
///    on data only and is infinite when h b_m >= 1.
struct EnergyRow {
  int m = 0;
  double theta_sq = 0.0;     ///< (eps/2) |theta_m|^2
  double theta_mass = 0.0;   ///< int theta_m
  double grad_cum = 0.0;     ///< eta h sum_{n<m} |grad theta_{n+1}|^2
  double phi_sq = 0.0;       ///< |phi_m|^2 / 2
  double v_sq = 0.0;         ///< |v_m|^2 / 2
  double beta_hat_int = 0.0; ///< int beta_hat(phi_m)
  double lhs = 0.0;
  double rhs_balance = 0.0;
  double rhs_split = 0.0;
  double rhs_gronwall = 0.0;
};

struct CumulativeRow {
  int m = 0;
  double sum_H = 0.0;          ///< h |sum_{n<m} theta_{n+1}|_H
  double sum_laplacian_H = 0.0;///< h |Delta_h sum_{n<m} theta_{n+1}|_H
  /// max nodal |u_m + ell phi_m - eta h Delta_h S_m - u_0 - ell phi_0 - h sum f|
  /// relative to 1 + max nodal |eta h Delta_h S_m|.
  double identity_defect = 0.0;
};

struct LinfSeries {
  std::vector<double> phi;
  std::vector<double> v;
  double phi_max = 0.0;
  double v_max = 0.0;
};

struct DiagnosticsReport {
  std::vector<EnergyRow> energy;           ///< m = 0..N
  std::vector<double> entropy_defects;     ///< per step n -> n+1, min over nodes
  LinfSeries linf;
  std::vector<CumulativeRow> cumulative;   ///< m = 0..N
  std::vector<double> u_norm;              ///< |u_m|_H (stored)
  std::vector<double> u_recomputed_norm;   ///< |eps theta_m + ln theta_m|_H
  double z_l2 = 0.0;                       ///< |z_bar|_{L2(0,T;H)}
  double min_theta = 0.0;
};

/// theta_new (ln theta_new - ln theta_old) - (theta_new - theta_old) >= 0.
double entropy_defect(double theta_old, double theta_new);

/// min over steps and nodes of entropy_defect.
double entropy_inequality_check(const Trajectory& traj);
std::vector<EnergyRow> energy_report(const Trajectory& traj);
std::vector<CumulativeRow> cumulative_W_bound(const Trajectory& traj);
LinfSeries linf_growth(const Trajectory& traj);

DiagnosticsReport diagnose(const Trajectory& traj);

}  // namespace nlpf
