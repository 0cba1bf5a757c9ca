#include "nlpf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlpf {

double entropy_defect(double theta_old, double theta_new) {
  const double x = (theta_new - theta_old) / theta_old;
  return theta_old * ((1.0 + x) * std::log1p(x) - x);
}

double entropy_inequality_check(const Trajectory& traj) {
  double worst = std::numeric_limits<double>::infinity();
  for (int n = 0; n < traj.N; ++n) {
    const auto& a = traj.states[n].theta;
    const auto& b = traj.states[n + 1].theta;
    for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::min(worst, entropy_defect(a[i], b[i]));
  }
  return traj.N > 0 ? worst : 0.0;
}

namespace {

double beta_hat_integral(const Grid& grid, const Nonlinearity& nl, const GridFunction& phi) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < phi.size(); ++i) s += grid.cell_volumes()[i] * nl.beta_hat(phi[i]);
  return s;
}

}  // namespace

std::vector<EnergyRow> energy_report(const Trajectory& traj) {
  const ProblemData& pd = *traj.problem;
  const Grid& grid = pd.grid();
  const Nonlinearity& nl = pd.nonlin();
  const double eps = pd.epsilon();
  const double h = traj.h;
  const double K = pd.plan().kernel_bound();
  const double p = nl.pi_lip;
  const double pi0 = nl.pi(0.0);
  const double c0 = 0.5 * pi0 * pi0 * grid.measure();

  std::vector<EnergyRow> rows;
  rows.reserve(static_cast<std::size_t>(traj.N) + 1);
  double grad_cum = 0.0, balance = 0.0, split = 0.0;
  std::vector<double> gron(static_cast<std::size_t>(traj.N) + 1, 0.0);
  double gron_sum = 0.0;  // h sum_{j=1}^{m-1} (b_j + 2K) G_j
  for (int m = 0; m <= traj.N; ++m) {
    const StepState& s = traj.states[m];
    if (m > 0) {
      const StepState& prev = traj.states[m - 1];
      const GridFunction& f = traj.f[m];
      grad_cum += pd.eta() * h * grad_norm_sq(grid, s.theta);
      GridFunction pi_phi(s.phi.size());
      for (Eigen::Index i = 0; i < s.phi.size(); ++i) pi_phi[i] = nl.pi(s.phi[i]);
      const GridFunction nonlocal = pd.plan().nonlocal_term(prev.phi);
      const double v_sq = inner_H(grid, s.v, s.v);
      const double phi_sq = inner_H(grid, s.phi, s.phi);
      balance += h * (inner_H(grid, f, s.theta) - inner_H(grid, nonlocal + pi_phi, s.v) +
                      inner_H(grid, s.v, s.phi) - v_sq);
      const double f_inf = norm_Linf(f);
      split += h * (f_inf * integrate(grid, s.theta) + K * inner_H(grid, prev.phi, prev.phi) + c0 +
                    (K + 0.5 * p) * v_sq + (0.5 * p + 0.5) * phi_sq);
    }
    EnergyRow row;
    row.m = m;
    row.theta_sq = 0.5 * eps * inner_H(grid, s.theta, s.theta);
    row.theta_mass = integrate(grid, s.theta);
    row.grad_cum = grad_cum;
    row.phi_sq = 0.5 * inner_H(grid, s.phi, s.phi);
    row.v_sq = 0.5 * inner_H(grid, s.v, s.v);
    row.beta_hat_int = beta_hat_integral(grid, nl, s.phi);
    row.lhs = row.theta_sq + row.theta_mass + row.grad_cum + row.phi_sq + row.v_sq + row.beta_hat_int;
    if (m == 0) {
      gron[0] = row.lhs;
      row.rhs_balance = row.rhs_split = row.rhs_gronwall = row.lhs;
    } else {
      const double e0 = rows.front().lhs;
      row.rhs_balance = e0 + balance;
      row.rhs_split = e0 + split;
      const double b_m = norm_Linf(traj.f[m]) + 2.0 * K + 2.0 * p + 1.0;
      const double denom = 1.0 - h * b_m;
      if (denom > 0.0 && std::isfinite(gron_sum)) {
        gron[m] = (gron[0] * (1.0 + 2.0 * h * K) + h * m * c0 + gron_sum) / denom;
      } else {
        gron[m] = std::numeric_limits<double>::infinity();
      }
      gron_sum += h * (b_m + 2.0 * K) * gron[m];
      row.rhs_gronwall = gron[m];
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<CumulativeRow> cumulative_W_bound(const Trajectory& traj) {
  const ProblemData& pd = *traj.problem;
  const Grid& grid = pd.grid();
  const double h = traj.h;
  const StepState& s0 = traj.states.front();
  std::vector<CumulativeRow> rows;
  GridFunction sum = grid.zeros();
  GridFunction f_sum = grid.zeros();
  for (int m = 0; m <= traj.N; ++m) {
    if (m > 0) {
      sum += traj.states[m].theta;
      f_sum += traj.f[m];
    }
    const StepState& s = traj.states[m];
    const GridFunction lap = pd.laplacian().apply(sum);
    CumulativeRow row;
    row.m = m;
    row.sum_H = h * norm_H(grid, sum);
    row.sum_laplacian_H = h * norm_H(grid, lap);
    const GridFunction lhs = s.u + pd.ell() * s.phi - pd.eta() * h * lap;
    const GridFunction rhs = s0.u + pd.ell() * s0.phi + h * f_sum;
    row.identity_defect = norm_Linf(lhs - rhs) / (1.0 + pd.eta() * h * norm_Linf(lap));
    rows.push_back(row);
  }
  return rows;
}

LinfSeries linf_growth(const Trajectory& traj) {
  LinfSeries out;
  for (const StepState& s : traj.states) {
    out.phi.push_back(norm_Linf(s.phi));
    out.v.push_back(norm_Linf(s.v));
  }
  out.phi_max = *std::max_element(out.phi.begin(), out.phi.end());
  out.v_max = *std::max_element(out.v.begin(), out.v.end());
  return out;
}

DiagnosticsReport diagnose(const Trajectory& traj) {
  const ProblemData& pd = *traj.problem;
  const Grid& grid = pd.grid();
  DiagnosticsReport rep;
  rep.energy = energy_report(traj);
  for (int n = 0; n < traj.N; ++n) {
    const auto& a = traj.states[n].theta;
    const auto& b = traj.states[n + 1].theta;
    double worst = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::min(worst, entropy_defect(a[i], b[i]));
    rep.entropy_defects.push_back(worst);
  }
  rep.linf = linf_growth(traj);
  rep.cumulative = cumulative_W_bound(traj);
  rep.min_theta = std::numeric_limits<double>::infinity();
  for (const StepState& s : traj.states) {
    rep.u_norm.push_back(norm_H(grid, s.u));
    const GridFunction u = pd.epsilon() * s.theta + s.theta.array().log().matrix();
    rep.u_recomputed_norm.push_back(norm_H(grid, u));
    rep.min_theta = std::min(rep.min_theta, s.theta.minCoeff());
  }
  double z_sq = 0.0;
  for (int n = 1; n <= traj.N; ++n) z_sq += traj.h * inner_H(grid, traj.z[n], traj.z[n]);
  rep.z_l2 = std::sqrt(z_sq);
  return rep;
}

}  // namespace nlpf
