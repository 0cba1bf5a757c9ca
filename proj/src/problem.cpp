#include "nlpf/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace nlpf {

namespace sources {

SourceTerm zero() {
  SourceTerm s;
  s.name = "zero";
  s.slab = [](const Grid& g, double, double) { return g.zeros(); };
  s.sup_bound = 0.0;
  return s;
}

SourceTerm constant(double value) {
  SourceTerm s;
  s.name = "constant";
  s.slab = [value](const Grid& g, double, double) { return g.constant(value); };
  s.sup_bound = std::abs(value);
  return s;
}

SourceTerm bump(double amplitude, double width, double cx, double cy, double omega) {
  SourceTerm s;
  s.name = "bump";
  s.slab = [=](const Grid& g, double t0, double t1) {
    // Exact time average of cos(omega t) over [t0, t1].
    double mean = 1.0;
    if (omega != 0.0) mean = (std::sin(omega * t1) - std::sin(omega * t0)) / (omega * (t1 - t0));
    GridFunction out(static_cast<Eigen::Index>(g.size()));
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto x = g.coords(k);
      const double dx = x[0] - cx;
      const double dy = g.dim() == 2 ? x[1] - cy : 0.0;
      out[static_cast<Eigen::Index>(k)] = amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width)) * mean;
    }
    return out;
  };
  s.sup_bound = std::abs(amplitude);
  return s;
}

}  // namespace sources

ProblemData::ProblemData(ProblemSpec spec) : spec_(std::move(spec)) {
  const auto n = static_cast<Eigen::Index>(spec_.grid.size());
  if (spec_.theta0.size() == 0) spec_.theta0 = GridFunction::Ones(n);
  if (spec_.phi0.size() == 0) spec_.phi0 = GridFunction::Zero(n);
  if (spec_.v0.size() == 0) spec_.v0 = GridFunction::Zero(n);
  plan_ = std::make_shared<const ConvolutionPlan>(spec_.grid, spec_.kernel);
  laplacian_ = std::make_shared<const NeumannLaplacian>(spec_.grid);
  dual_ = std::make_shared<const DualNorm>(spec_.grid);
}

ProblemData ProblemData::with_epsilon(double epsilon) const {
  ProblemData copy = *this;
  copy.spec_.epsilon = epsilon;
  return copy;
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Deterministic sample points for the nonlinearity checks.
std::vector<double> sample_points(double radius) {
  std::vector<double> pts;
  const int n = 101;
  for (int k = 0; k < n; ++k) pts.push_back(-radius + 2.0 * radius * k / (n - 1));
  return pts;
}

void check_field(const ProblemData& pd, const GridFunction& f, const std::string& name,
                 std::vector<Violation>& out) {
  if (static_cast<std::size_t>(f.size()) != pd.grid().size()) {
    out.push_back({name + "_size", name + " length does not match grid node count"});
    return;
  }
  if (!all_finite(f)) out.push_back({name + "_not_finite", name + " contains non-finite values"});
}

}  // namespace

std::vector<Violation> validate(const ProblemData& pd) {
  std::vector<Violation> out;
  const ProblemSpec& s = pd.spec();

  for (int a = 0; a < s.grid.dim(); ++a)
    if (s.grid.extent(a) < 3)
      out.push_back({"grid_nodes", "grid axis " + std::to_string(a) + " has fewer than 3 nodes"});

  if (!(s.ell > 0.0)) out.push_back({"ell", "ell must be positive"});
  if (!(s.eta > 0.0)) out.push_back({"eta", "eta must be positive"});
  if (!(s.epsilon > 0.0 && s.epsilon <= 1.0)) out.push_back({"epsilon", "epsilon must lie in (0, 1]"});
  if (!(s.T > 0.0)) out.push_back({"T", "final time must be positive"});

  // (C1)
  if (evenness_defect(s.kernel, s.grid) > 1e-14 * (1.0 + pd.plan().kernel_bound()))
    out.push_back({"kernel_even", "kernel evenness violated"});
  if (!std::isfinite(pd.plan().kernel_bound()))
    out.push_back({"kernel_bound", "kernel row integral is not finite"});

  // (C2), (C3) on sampled points.
  const Nonlinearity& nl = s.nonlin;
  double radius = 4.0;
  if (s.phi0.size() > 0 && s.phi0.allFinite()) radius += 2.0 * norm_Linf(s.phi0);
  const auto pts = sample_points(radius);
  if (nl.beta_hat(0.0) != 0.0) out.push_back({"beta_hat_zero", "beta_hat(0) must be 0"});
  bool monotone = true, hat_nonneg = true, subdiff = true, pi_lip = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0 && nl.beta(pts[i]) < nl.beta(pts[i - 1])) monotone = false;
    if (nl.beta_hat(pts[i]) < 0.0) hat_nonneg = false;
    for (std::size_t j = 0; j < pts.size(); j += 7) {
      const double a = pts[j], b = pts[i];
      const double lhs = nl.beta_hat(a) - nl.beta_hat(b);
      const double rhs = nl.beta(b) * (a - b);
      if (lhs < rhs - 1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs))) subdiff = false;
      if (std::abs(nl.pi(a) - nl.pi(b)) > nl.pi_lip * std::abs(a - b) * (1.0 + 1e-12) + 1e-14) pi_lip = false;
    }
  }
  if (!monotone) out.push_back({"beta_monotone", "beta is not nondecreasing"});
  if (!hat_nonneg) out.push_back({"beta_hat_nonneg", "beta_hat takes negative values"});
  if (!subdiff) out.push_back({"beta_subdifferential", "beta is not the subdifferential of beta_hat"});
  if (!pi_lip) out.push_back({"pi_lipschitz", "pi violates its declared Lipschitz bound"});

  // (C4)
  check_field(pd, s.theta0, "theta0", out);
  check_field(pd, s.phi0, "phi0", out);
  check_field(pd, s.v0, "v0", out);
  if (static_cast<std::size_t>(s.theta0.size()) == pd.grid().size() && s.theta0.allFinite()) {
    const double lo = s.theta0.minCoeff();
    if (!(lo > 0.0) || lo < s.theta_min_input)
      out.push_back({"theta0_positive", "theta0 not strictly positive (min " + fmt(lo) + ", floor " +
                                            fmt(s.theta_min_input) + ")"});
  }
  if (!std::isfinite(s.source.sup_bound)) out.push_back({"source", "source is not bounded"});
  return out;
}

std::vector<std::string> step_warnings(const ProblemData& pd, double h) {
  std::vector<std::string> out;
  if (pd.spec().source.sup_bound * h > 0.5)
    out.push_back("per-step source mass sup|f| * h = " + fmt(pd.spec().source.sup_bound * h) + " exceeds 1/2");
  return out;
}

}  // namespace nlpf
