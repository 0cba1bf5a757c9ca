#include "nlpf/experiments.hpp"

#include "nlpf/errors.hpp"
#include "nlpf/interpolants.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace nlpf {

namespace {

std::vector<double> merged_breakpoints(const Trajectory& a, const Trajectory& b) {
  const double T = a.T();
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(a.N + b.N) + 2);
  for (int n = 0; n <= a.N; ++n) t.push_back(n == a.N ? T : n * a.h);
  for (int n = 0; n <= b.N; ++n) t.push_back(n == b.N ? T : n * b.h);
  std::sort(t.begin(), t.end());
  std::vector<double> out;
  const double snap = 1e-12 * std::max(1.0, T);
  for (double x : t) {
    x = std::min(x, T);
    if (out.empty() || x - out.back() > snap) out.push_back(x);
  }
  out.back() = T;
  return out;
}

std::vector<Trajectory> run_members(const std::vector<std::shared_ptr<const ProblemData>>& problems,
                                    const std::vector<int>& steps, const StepperSettings& settings) {
  std::vector<std::future<Trajectory>> jobs;
  jobs.reserve(problems.size());
  for (std::size_t k = 0; k < problems.size(); ++k)
    jobs.push_back(std::async(std::launch::async, [&, k] { return run(problems[k], steps[k], settings); }));
  std::vector<Trajectory> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

double edge_slope_max(const Grid& grid, const GridFunction& u) {
  double m = 0.0;
  for (int j = 0; j < grid.extent(1); ++j)
    for (int i = 0; i + 1 < grid.extent(0); ++i)
      m = std::max(m, std::abs(u[grid.index(i + 1, j)] - u[grid.index(i, j)]) / grid.spacing(0));
  if (grid.dim() == 2)
    for (int j = 0; j + 1 < grid.extent(1); ++j)
      for (int i = 0; i < grid.extent(0); ++i)
        m = std::max(m, std::abs(u[grid.index(i, j + 1)] - u[grid.index(i, j)]) / grid.spacing(1));
  return m;
}

// Fits C on the coarsest pair and checks every pair against it.
void close_inequality(CauchyStudy& study) {
  if (study.rows.empty()) {
    study.inequality_holds = true;
    return;
  }
  const StudyRow& first = study.rows.front();
  if (first.shape > 0.0) {
    study.fitted_C = first.lhs / first.shape;
  } else {
    study.fitted_C = first.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  study.inequality_holds = true;
  for (StudyRow& r : study.rows) {
    r.bound = r.shape == 0.0 ? 0.0 : study.fitted_C * r.shape;
    r.holds = r.lhs <= r.bound * (1.0 + 1e-12) + 1e-300;
    study.inequality_holds = study.inequality_holds && r.holds;
  }
}

void fit_phi_rate(CauchyStudy& study) {
  if (study.rows.size() < 3) return;
  std::vector<double> x, y;
  for (const StudyRow& r : study.rows) {
    x.push_back(r.a);
    y.push_back(r.metrics.phi_hat_CH);
  }
  study.phi_rate = fit_rate(x, y);
  study.slope_fitted = !study.phi_rate.exact;
}

}  // namespace

PairMetrics pair_metrics(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("pair_metrics: trajectories use different grids");
  if (std::abs(a.T() - b.T()) > 1e-12 * std::max(1.0, a.T()))
    throw std::invalid_argument("pair_metrics: trajectories use different horizons");
  const Grid& grid = a.grid();
  const DualNorm& dual = a.problem->dual();
  const std::vector<double> t = merged_breakpoints(a, b);
  auto inner_vs = [&](const GridFunction& x, const GridFunction& y) { return dual.inner(x, y); };

  PairMetrics m;
  double vs_sq = 0.0, vbar_sq = 0.0;
  GridFunction dv_prev;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const GridFunction dphi = eval(a, InterpolantKind::hat_phi, t[i]) - eval(b, InterpolantKind::hat_phi, t[i]);
    const GridFunction dv = eval(a, InterpolantKind::hat_v, t[i]) - eval(b, InterpolantKind::hat_v, t[i]);
    m.phi_hat_CH = std::max(m.phi_hat_CH, norm_H(grid, dphi));
    m.v_hat_CH = std::max(m.v_hat_CH, norm_H(grid, dv));
    if (i > 0) {
      const double dt = t[i] - t[i - 1];
      vs_sq += dt * affine_square_integral(dv_prev, dv - dv_prev, inner_vs);
      const double mid = 0.5 * (t[i] + t[i - 1]);
      const GridFunction dbar = eval(a, InterpolantKind::bar_v, mid) - eval(b, InterpolantKind::bar_v, mid);
      vbar_sq += dt * inner_H(grid, dbar, dbar);
    }
    dv_prev = dv;
  }
  m.v_hat_L2Vstar = std::sqrt(std::max(0.0, vs_sq));
  m.v_bar_L2H = std::sqrt(vbar_sq);
  return m;
}

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& metric) {
  if (h.size() != metric.size()) throw std::invalid_argument("fit_rate: size mismatch");
  if (h.size() < 3) throw InsufficientLevels("fit_rate: at least 3 points are required");
  RateFit fit;
  if (std::all_of(metric.begin(), metric.end(), [](double m) { return m == 0.0; })) {
    fit.exact = true;
    return fit;
  }
  for (std::size_t i = 0; i < h.size(); ++i)
    if (!(metric[i] > 0.0) || !(h[i] > 0.0)) throw DegenerateFit("fit_rate: nonpositive value at point " + std::to_string(i));
  const double n = static_cast<double>(h.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sx += std::log(h[i]);
    sy += std::log(metric[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(metric[i]) - my);
  }
  if (sxx == 0.0) throw DegenerateFit("fit_rate: all abscissae coincide");
  fit.slope = sxy / sxx;
  fit.log_constant = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double r = std::log(metric[i]) - (fit.log_constant + fit.slope * std::log(h[i]));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss);
  return fit;
}

UniformQuantities uniform_quantities(const Trajectory& traj) {
  const ProblemData& pd = *traj.problem;
  const Grid& grid = pd.grid();
  UniformQuantities q;
  q.eps = pd.epsilon();
  double theta_sup = 0.0, log_sup = 0.0, l2v = 0.0;
  for (int n = 1; n <= traj.N; ++n) {
    const GridFunction& th = traj.states[n].theta;
    theta_sup = std::max(theta_sup, norm_H(grid, th));
    log_sup = std::max(log_sup, norm_H(grid, GridFunction(th.array().log().matrix())));
    const double nv = norm_V(grid, th);
    l2v += traj.h * nv * nv;
  }
  for (const StepState& s : traj.states) {
    const GridFunction lap = pd.laplacian().apply(s.phi);
    const double w22 = inner_H(grid, s.phi, s.phi) + grad_norm_sq(grid, s.phi) + inner_H(grid, lap, lap);
    q.phi_W22 = std::max(q.phi_W22, std::sqrt(w22));
    q.phi_W1inf = std::max(q.phi_W1inf, norm_Linf(s.phi) + edge_slope_max(grid, s.phi));
  }
  q.sqrt_eps_theta_LinfH = std::sqrt(q.eps) * theta_sup;
  q.theta_L2V = std::sqrt(l2v);
  q.log_theta_LinfH = log_sup;
  return q;
}

CauchyStudy cauchy_in_h(std::shared_ptr<const ProblemData> pd, const std::vector<double>& h_list,
                        const StepperSettings& settings) {
  if (h_list.size() < 3) throw InsufficientLevels("cauchy_in_h: at least 3 step sizes are required");
  const double T = pd->T();
  std::vector<int> steps;
  for (std::size_t k = 0; k < h_list.size(); ++k) {
    const double h = h_list[k];
    const double n = std::round(T / h);
    if (!(h > 0.0) || n < 1.0 || std::abs(n * h - T) > 1e-9 * T)
      throw std::invalid_argument("cauchy_in_h: T/h is not an integer for h = " + std::to_string(h));
    steps.push_back(static_cast<int>(n));
    if (k > 0 && (steps[k] <= steps[k - 1] || steps[k] % steps[k - 1] != 0))
      throw std::invalid_argument("cauchy_in_h: step sizes must decrease and be nested");
  }
  const std::vector<std::shared_ptr<const ProblemData>> problems(h_list.size(), pd);
  const std::vector<Trajectory> trajs = run_members(problems, steps, settings);

  CauchyStudy study;
  study.kind = "h";
  for (std::size_t k = 0; k + 1 < trajs.size(); ++k) {
    StudyRow r;
    r.a = r.h_a = trajs[k].h;
    r.b = r.h_b = trajs[k + 1].h;
    r.metrics = pair_metrics(trajs[k], trajs[k + 1]);
    r.lhs = r.metrics.phi_hat_CH + r.metrics.v_hat_CH + r.metrics.v_bar_L2H;
    r.shape = std::sqrt(r.h_a) + std::sqrt(r.h_b) + std::sqrt(r.metrics.v_hat_L2Vstar);
    study.rows.push_back(r);
  }
  close_inequality(study);
  fit_phi_rate(study);
  return study;
}

int StepRule::steps(const ProblemData& pd, double eps) const {
  const double h = std::min(max_step(eps, pd.ell(), pd.nonlin().pi_lip, safety), h_base * eps);
  return static_cast<int>(std::ceil(pd.T() / h - 1e-12));
}

CauchyStudy cauchy_in_eps(std::shared_ptr<const ProblemData> pd, const std::vector<double>& eps_list,
                          const StepRule& rule, const StepperSettings& settings) {
  if (eps_list.empty()) throw InsufficientLevels("cauchy_in_eps: eps_list is empty");
  for (std::size_t k = 1; k < eps_list.size(); ++k)
    if (!(eps_list[k] < eps_list[k - 1])) throw std::invalid_argument("cauchy_in_eps: eps_list must decrease");
  std::vector<std::shared_ptr<const ProblemData>> problems;
  std::vector<int> steps;
  for (double eps : eps_list) {
    problems.push_back(std::make_shared<const ProblemData>(pd->with_epsilon(eps)));
    steps.push_back(rule.steps(*problems.back(), eps));
  }
  const std::vector<Trajectory> trajs = run_members(problems, steps, settings);

  CauchyStudy study;
  study.kind = "eps";
  for (std::size_t k = 0; k + 1 < trajs.size(); ++k) {
    StudyRow r;
    r.a = eps_list[k];
    r.b = eps_list[k + 1];
    r.h_a = trajs[k].h;
    r.h_b = trajs[k + 1].h;
    r.metrics = pair_metrics(trajs[k], trajs[k + 1]);
    r.lhs = r.metrics.phi_hat_CH + r.metrics.v_hat_CH + r.metrics.v_bar_L2H;
    r.shape = std::sqrt(r.metrics.v_hat_L2Vstar);
    study.rows.push_back(r);
  }
  close_inequality(study);
  fit_phi_rate(study);

  for (const Trajectory& t : trajs) study.uniform.push_back(uniform_quantities(t));
  auto growth = [&](double UniformQuantities::*field) {
    const double q0 = study.uniform.front().*field;
    double g = 1.0;
    for (const UniformQuantities& q : study.uniform) {
      if (q0 > 0.0) g = std::max(g, q.*field / q0);
      else if (q.*field > 0.0) g = std::numeric_limits<double>::infinity();
    }
    return g;
  };
  study.uniform_growth = std::max({growth(&UniformQuantities::sqrt_eps_theta_LinfH),
                                   growth(&UniformQuantities::theta_L2V),
                                   growth(&UniformQuantities::log_theta_LinfH), growth(&UniformQuantities::phi_W22),
                                   growth(&UniformQuantities::phi_W1inf)});
  return study;
}

}  // namespace nlpf
