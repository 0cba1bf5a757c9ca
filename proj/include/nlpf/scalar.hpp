#pragma once

#include "nlpf/grid.hpp"
#include "nlpf/nonlinearity.hpp"

namespace nlpf {

struct ScalarSolveConfig {
  /// Accept when |residual| <= tol_rel * max(1, |g|).
  double tol_rel = 1e-14;
  int max_iter = 200;
  double bracket_growth = 2.0;
  int max_expansions = 200;
};

/// Unique root of (1 + h) r + h^2 beta(r) + h^2 pi(r) = g. The map is
/// strictly increasing when 1 + h - pi_lip h^2 > 0; otherwise BracketFailure.
double solve_scalar(double g, double h, const Nonlinearity& nonlin, const ScalarSolveConfig& cfg = {});

/// Nodewise solve_scalar; BracketFailure carries the node index.
GridFunction solve_field(const GridFunction& g, double h, const Nonlinearity& nonlin,
                         const ScalarSolveConfig& cfg = {});

/// Lipschitz constant of the solution map in g: 1 / (1 + h - pi_lip h^2).
double scalar_lipschitz(double h, double pi_lip);

}  // namespace nlpf
