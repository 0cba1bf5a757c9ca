#pragma once

#include <functional>
#include <string>

namespace nlpf {

/// Monotone part beta = d(beta_hat) and Lipschitz perturbation pi of the
/// order-parameter equation. Derivatives are carried for Newton solves.
struct Nonlinearity {
  std::string beta_name;
  std::function<double(double)> beta;
  std::function<double(double)> beta_prime;
  std::function<double(double)> beta_hat;
  /// Lipschitz constant of beta on [lo, hi].
  std::function<double(double lo, double hi)> beta_lip_on;

  std::string pi_name;
  std::function<double(double)> pi;
  std::function<double(double)> pi_prime;
  double pi_lip = 0.0;
};

namespace nonlinearities {
/// beta(r) = c r^3, beta_hat(r) = c r^4 / 4.
Nonlinearity cubic(double coeff = 1.0);
/// beta(r) = c r, beta_hat(r) = c r^2 / 2.
Nonlinearity linear(double coeff);
Nonlinearity zero_beta();

/// pi(r) = kappa (c - r).
void set_linear_pi(Nonlinearity& n, double kappa, double c);
void set_zero_pi(Nonlinearity& n);
}  // namespace nonlinearities

}  // namespace nlpf
