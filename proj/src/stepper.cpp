#include "nlpf/stepper.hpp"

#include "nlpf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nlpf {

double kappa(double eps, double h, double ell, double pi_lip) {
  return ell * ell * h * h / (eps * (1.0 + h - pi_lip * h * h));
}

double max_step(double eps, double ell, double pi_lip, double safety) {
  if (!(safety > 0.0 && safety < 1.0)) throw std::invalid_argument("max_step: safety must lie in (0, 1)");
  const double cap = pi_lip > 0.0 ? std::min(1.0, 1.0 / pi_lip) : 1.0;
  if (kappa(eps, cap, ell, pi_lip) <= safety) return cap;
  // kappa is increasing in h on (0, cap].
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * cap; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kappa(eps, mid, ell, pi_lip) <= safety ? lo : hi) = mid;
  }
  return lo;
}

Stepper::Stepper(std::shared_ptr<const ProblemData> problem, StepperSettings settings)
    : problem_(std::move(problem)),
      settings_(settings),
      elliptic_(problem_->grid(), problem_->laplacian(), settings.elliptic) {}

StepState Stepper::initial_state() const {
  const ProblemSpec& s = problem_->spec();
  StepState st;
  st.n = 0;
  st.theta = s.theta0;
  st.phi = s.phi0;
  st.v = s.v0;
  st.u = s.epsilon * s.theta0 + s.theta0.array().log().matrix();
  return st;
}

GridFunction Stepper::map_A(const StepState& prev, double h, const GridFunction& f_slab, const GridFunction& phi) {
  const ProblemData& pd = *problem_;
  const GridFunction g = h * f_slab + pd.ell() * (prev.phi - phi) + prev.u;
  return elliptic_.solve_from(g, pd.epsilon(), pd.eta(), h, prev.theta).theta;
}

GridFunction Stepper::map_B(const StepState& prev, double h, const GridFunction& theta) const {
  const ProblemData& pd = *problem_;
  const GridFunction rest = prev.phi + h * prev.v + h * prev.phi - h * h * pd.plan().nonlocal_term(prev.phi);
  return solve_field(pd.ell() * h * h * theta + rest, h, pd.nonlin(), settings_.scalar);
}

std::pair<StepState, StepReport> Stepper::step(const StepState& prev, double h, const GridFunction& f_slab) {
  const ProblemData& pd = *problem_;
  const Grid& grid = pd.grid();
  const double eps = pd.epsilon();

  const GridFunction g_theta_base = h * f_slab + pd.ell() * prev.phi + prev.u;
  const GridFunction g_phi_base =
      prev.phi + h * prev.v + h * prev.phi - h * h * pd.plan().nonlocal_term(prev.phi);

  StepReport rep;
  rep.n = prev.n + 1;
  rep.kappa_theory = kappa(eps, h, pd.ell(), pd.nonlin().pi_lip);

  auto apply_A = [&](const GridFunction& phi, const GridFunction& guess) {
    auto r = elliptic_.solve_from(g_theta_base - pd.ell() * phi, eps, pd.eta(), h, guess);
    rep.newton_iters += r.newton_iters_total;
    return r.theta;
  };
  auto apply_B = [&](const GridFunction& theta) {
    return solve_field(pd.ell() * h * h * theta + g_phi_base, h, pd.nonlin(), settings_.scalar);
  };

  const double tol = settings_.fp_rel_tol * (1.0 + norm_H(grid, prev.phi));
  GridFunction phi = prev.phi;
  GridFunction theta = prev.theta;
  bool converged = false;
  for (int k = 0; k < settings_.fp_max_iter; ++k) {
    theta = apply_A(phi, theta);
    GridFunction next = apply_B(theta);
    const double d = norm_H(grid, next - phi);
    if (!rep.updates.empty() && rep.updates.back() > 0.0)
      rep.contraction_ratio_measured = std::max(rep.contraction_ratio_measured, d / rep.updates.back());
    rep.updates.push_back(d);
    phi = std::move(next);
    ++rep.fixed_point_iters;
    if (d <= tol) {
      converged = true;
      break;
    }
  }
  rep.last_update_H = rep.updates.empty() ? 0.0 : rep.updates.back();
  if (!converged) throw NoConvergence("fixed-point iteration", rep.fixed_point_iters, rep.last_update_H);

  // theta_{n+1} = A(phi_{n+1}) so the first equation holds at the accepted phi.
  theta = apply_A(phi, theta);
  if (!(theta.minCoeff() > 0.0)) throw std::runtime_error("positivity lost: theta has a nonpositive node");

  StepState next;
  next.n = prev.n + 1;
  next.theta = theta;
  next.phi = phi;
  next.v = (phi - prev.phi) / h;
  next.u = eps * theta + theta.array().log().matrix();

  const GridFunction g_theta = g_theta_base - pd.ell() * phi;
  const GridFunction eq1 = elliptic_.residual(theta, g_theta, eps, pd.eta(), h);
  rep.defect_eq1_vstar = pd.dual().norm(eq1);
  const Nonlinearity& nl = pd.nonlin();
  GridFunction eq2(phi.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i)
    eq2[i] = (1.0 + h) * phi[i] + h * h * nl.beta(phi[i]) + h * h * nl.pi(phi[i]) - pd.ell() * h * h * theta[i] -
             g_phi_base[i];
  rep.defect_eq2_H = norm_H(grid, eq2);
  rep.min_theta = theta.minCoeff();
  return {std::move(next), std::move(rep)};
}

Trajectory run(std::shared_ptr<const ProblemData> pd, int N, const StepperSettings& settings) {
  if (N < 1) throw std::invalid_argument("run: N must be at least 1");
  const ProblemSpec& s = pd->spec();
  const auto n = static_cast<Eigen::Index>(pd->grid().size());
  if (s.theta0.size() != n || s.phi0.size() != n || s.v0.size() != n)
    throw std::invalid_argument("run: initial data size does not match the grid");
  if (!(s.theta0.minCoeff() > 0.0)) throw std::invalid_argument("run: theta0 must be strictly positive");
  const double h = s.T / N;
  const double hmax = max_step(s.epsilon, s.ell, s.nonlin.pi_lip, settings.kappa_safety);
  if (h > hmax * (1.0 + 1e-12))
    throw std::invalid_argument("run: step " + std::to_string(h) + " exceeds max_step " + std::to_string(hmax));

  Trajectory traj;
  traj.problem = pd;
  traj.h = h;
  traj.N = N;
  Stepper stepper(pd, settings);
  traj.states.reserve(static_cast<std::size_t>(N) + 1);
  traj.states.push_back(stepper.initial_state());
  traj.z.push_back(pd->grid().zeros());
  traj.f.push_back(pd->grid().zeros());
  for (int k = 0; k < N; ++k) {
    // Slab average over [kh, (k+1)h] with endpoints computed from the index.
    const double t0 = s.T * k / N;
    const double t1 = s.T * (k + 1) / N;
    GridFunction slab = pd->source_average(t0, t1);
    try {
      auto [state, report] = stepper.step(traj.states.back(), h, slab);
      traj.z.push_back((state.v - traj.states.back().v) / h);
      traj.states.push_back(std::move(state));
      traj.reports.push_back(std::move(report));
      traj.f.push_back(std::move(slab));
    } catch (const NoConvergence& e) {
      throw StepFailure(k + 1, e.what(), true);
    } catch (const BracketFailure& e) {
      throw StepFailure(k + 1, e.what(), true);
    } catch (const std::runtime_error& e) {
      throw StepFailure(k + 1, e.what(), false);
    }
  }
  return traj;
}

Trajectory run(const ProblemData& pd, int N, const StepperSettings& settings) {
  return run(std::make_shared<const ProblemData>(pd), N, settings);
}

}  // namespace nlpf
