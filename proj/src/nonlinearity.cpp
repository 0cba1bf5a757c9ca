#include "nlpf/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlpf::nonlinearities {

namespace {

Nonlinearity with_zero_pi(Nonlinearity n) {
  set_zero_pi(n);
  return n;
}

}  // namespace

Nonlinearity cubic(double coeff) {
  if (coeff < 0.0) throw std::invalid_argument("cubic beta needs a nonnegative coefficient");
  Nonlinearity n;
  n.beta_name = "cubic";
  n.beta = [coeff](double r) { return coeff * r * r * r; };
  n.beta_prime = [coeff](double r) { return 3.0 * coeff * r * r; };
  n.beta_hat = [coeff](double r) { return 0.25 * coeff * r * r * r * r; };
  n.beta_lip_on = [coeff](double lo, double hi) {
    const double m = std::max(std::abs(lo), std::abs(hi));
    return 3.0 * coeff * m * m;
  };
  return with_zero_pi(n);
}

Nonlinearity linear(double coeff) {
  if (coeff < 0.0) throw std::invalid_argument("linear beta needs a nonnegative coefficient");
  Nonlinearity n;
  n.beta_name = "linear";
  n.beta = [coeff](double r) { return coeff * r; };
  n.beta_prime = [coeff](double) { return coeff; };
  n.beta_hat = [coeff](double r) { return 0.5 * coeff * r * r; };
  n.beta_lip_on = [coeff](double, double) { return coeff; };
  return with_zero_pi(n);
}

Nonlinearity zero_beta() {
  Nonlinearity n = linear(0.0);
  n.beta_name = "zero";
  return n;
}

void set_linear_pi(Nonlinearity& n, double kappa, double c) {
  n.pi_name = "linear";
  n.pi = [kappa, c](double r) { return kappa * (c - r); };
  n.pi_prime = [kappa](double) { return -kappa; };
  n.pi_lip = std::abs(kappa);
}

void set_zero_pi(Nonlinearity& n) {
  n.pi_name = "zero";
  n.pi = [](double) { return 0.0; };
  n.pi_prime = [](double) { return 0.0; };
  n.pi_lip = 0.0;
}

}  // namespace nlpf::nonlinearities
