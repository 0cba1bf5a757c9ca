#pragma once

#include "nlpf/config.hpp"
#include "nlpf/problem.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

namespace fixtures {

inline std::string source_path(const std::string& rel) { return std::string(NLPF_SOURCE_DIR) + "/" + rel; }

/// The shipped default preset; tests adjust fields on the returned spec.
inline nlpf::RunConfig default_config() { return nlpf::load_config(source_path("configs/default.ini")); }

inline std::shared_ptr<const nlpf::ProblemData> default_problem() {
  return std::make_shared<const nlpf::ProblemData>(default_config().spec);
}

/// Default preset on a shorter horizon, for runs with very few steps.
inline std::shared_ptr<const nlpf::ProblemData> default_problem(double T) {
  nlpf::ProblemSpec s = default_config().spec;
  s.T = T;
  return std::make_shared<const nlpf::ProblemData>(s);
}

/// Spatially constant data with everything that couples nodes switched off.
inline nlpf::ProblemSpec constant_spec(int nodes, double theta, double phi, double v) {
  nlpf::ProblemSpec s;
  s.grid = nlpf::Grid(nodes, 1.0);
  s.kernel = nlpf::kernels::zero();
  s.nonlin = nlpf::nonlinearities::cubic();
  nlpf::nonlinearities::set_zero_pi(s.nonlin);
  s.source = nlpf::sources::zero();
  s.theta0 = s.grid.constant(theta);
  s.phi0 = s.grid.constant(phi);
  s.v0 = s.grid.constant(v);
  return s;
}

}  // namespace fixtures
