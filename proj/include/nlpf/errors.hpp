#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlpf {

/// An iterative solver stopped before reaching its tolerance.
class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& where, int iterations, double residual)
      : std::runtime_error(where + ": no convergence after " + std::to_string(iterations) +
                           " iterations (residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// The scalar root finder could not bracket a sign change.
class BracketFailure : public std::runtime_error {
 public:
  BracketFailure(double g, double h, std::ptrdiff_t node = -1)
      : std::runtime_error("bracket failure for g=" + std::to_string(g) + ", h=" + std::to_string(h) +
                           (node >= 0 ? " at node " + std::to_string(node) : std::string{})),
        node_(node) {}

  std::ptrdiff_t node() const { return node_; }

 private:
  std::ptrdiff_t node_;
};

/// Raised by run() with the failing time index attached.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(int step, const std::string& cause, bool convergence)
      : std::runtime_error("step " + std::to_string(step) + ": " + cause),
        step_(step),
        convergence_(convergence) {}

  int step() const { return step_; }
  bool is_convergence_failure() const { return convergence_; }

 private:
  int step_;
  bool convergence_;
};

class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class DegenerateFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientLevels : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or rejected configuration file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlpf
