#pragma once

#include "nlpf/grid.hpp"
#include "nlpf/laplacian.hpp"
#include "nlpf/nonlinearity.hpp"
#include "nlpf/nonlocal.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace nlpf {

/// Heat source f(x, t) = profile(x) * g(t), queried as time averages.
struct SourceTerm {
  std::string name = "zero";
  /// (1/(t1 - t0)) * integral of f over [t0, t1].
  std::function<GridFunction(const Grid&, double t0, double t1)> slab;
  /// Upper bound for sup |f| over the space-time domain.
  double sup_bound = 0.0;

  GridFunction average(const Grid& grid, double t0, double t1) const {
    return slab ? slab(grid, t0, t1) : grid.zeros();
  }
};

namespace sources {
SourceTerm zero();
SourceTerm constant(double value);
/// amplitude * exp(-|x - center|^2 / (2 width^2)) * cos(omega t).
SourceTerm bump(double amplitude, double width, double cx, double cy, double omega);
}  // namespace sources

/// Raw problem description; see ProblemData for the checked, derived form.
struct ProblemSpec {
  double ell = 1.0;
  double eta = 1.0;
  double epsilon = 1.0;
  double T = 1.0;
  double theta_min_input = 1e-6;
  Grid grid{33, 1.0};
  Kernel kernel = kernels::zero();
  Nonlinearity nonlin = nonlinearities::cubic();
  SourceTerm source = sources::zero();
  GridFunction theta0;
  GridFunction phi0;
  GridFunction v0;
};

/// Immutable problem instance with the operators it needs precomputed.
class ProblemData {
 public:
  explicit ProblemData(ProblemSpec spec);

  const ProblemSpec& spec() const { return spec_; }
  const Grid& grid() const { return spec_.grid; }
  double ell() const { return spec_.ell; }
  double eta() const { return spec_.eta; }
  double epsilon() const { return spec_.epsilon; }
  double T() const { return spec_.T; }
  const Nonlinearity& nonlin() const { return spec_.nonlin; }

  const ConvolutionPlan& plan() const { return *plan_; }
  const NeumannLaplacian& laplacian() const { return *laplacian_; }
  const DualNorm& dual() const { return *dual_; }

  GridFunction source_average(double t0, double t1) const { return spec_.source.average(spec_.grid, t0, t1); }

  /// Same problem with a different epsilon (operators are shared).
  ProblemData with_epsilon(double epsilon) const;

 private:
  ProblemSpec spec_;
  std::shared_ptr<const ConvolutionPlan> plan_;
  std::shared_ptr<const NeumannLaplacian> laplacian_;
  std::shared_ptr<const DualNorm> dual_;
};

struct Violation {
  std::string code;
  std::string message;
};

/// Every violated admissibility condition; empty when the instance is valid.
std::vector<Violation> validate(const ProblemData& pd);

/// Non-fatal notes for a given step size (currently the per-step source
/// mass condition sup|f| * h <= 1/2 used by the energy estimate).
std::vector<std::string> step_warnings(const ProblemData& pd, double h);

}  // namespace nlpf
