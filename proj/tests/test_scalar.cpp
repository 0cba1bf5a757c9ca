#include "nlpf/errors.hpp"
#include "nlpf/scalar.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace nlpf;

namespace {

// Bisection root of (1 + h) r + h^2 (beta(r) + pi(r)) = g with a bracket grown until it changes sign.
double oracle_root(double g, double h, const Nonlinearity& nl) {
  auto F = [&](double r) { return (1.0 + h) * r + h * h * (nl.beta(r) + nl.pi(r)) - g; };
  double lo = -1.0, hi = 1.0;
  while (F(lo) > 0.0) lo *= 2.0;
  while (F(hi) < 0.0) hi *= 2.0;
  return oracle::bisect(F, lo, hi, 2000);
}

std::vector<Nonlinearity> shipped() {
  std::vector<Nonlinearity> out;
  for (Nonlinearity base : {nonlinearities::cubic(), nonlinearities::cubic(3.0), nonlinearities::linear(2.0),
                            nonlinearities::zero_beta()}) {
    Nonlinearity a = base;
    nonlinearities::set_zero_pi(a);
    out.push_back(a);
    Nonlinearity b = base;
    nonlinearities::set_linear_pi(b, 1.0, 0.0);
    out.push_back(b);
    Nonlinearity c = base;
    nonlinearities::set_linear_pi(c, 2.5, 0.4);
    out.push_back(c);
  }
  return out;
}

double valid_h(std::mt19937_64& rng, double pi_lip) {
  const double cap = pi_lip > 0.0 ? std::min(1.0, 1.0 / pi_lip) : 1.0;
  std::uniform_real_distribution<double> d(1e-4, 0.999);
  return cap * d(rng);
}

}  // namespace

TEST_CASE("closed-form roots") {
  Nonlinearity nl = nonlinearities::cubic();
  nonlinearities::set_zero_pi(nl);
  for (double h : {0.01, 0.3, 0.99}) CHECK(solve_scalar(0.0, h, nl) == 0.0);
  for (const Nonlinearity& n : shipped())
    for (double h : {0.05, 0.3}) {
      const double g = (1.0 + h) + h * h * (n.beta(1.0) + n.pi(1.0));
      CHECK(solve_scalar(g, h, n) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("cubic beta with pi = -r/2 at h = 0.1, g = 1") {
  Nonlinearity nl = nonlinearities::cubic();
  nonlinearities::set_linear_pi(nl, 0.5, 0.0);
  const double ref = oracle::bisect([](double r) { return 1.1 * r + 0.01 * r * r * r - 0.005 * r - 1.0; }, 0.0, 1.0);
  CHECK(std::abs(solve_scalar(1.0, 0.1, nl) - ref) <= 1e-14);
}

TEST_CASE("random (g, h) against bisection for every shipped nonlinearity") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> dg(-50.0, 50.0);
  const auto all = shipped();
  for (int k = 0; k < 10000; ++k) {
    const Nonlinearity& nl = all[static_cast<std::size_t>(k) % all.size()];
    const double g = dg(rng), h = valid_h(rng, nl.pi_lip);
    const double ref = oracle_root(g, h, nl);
    CHECK(std::abs(solve_scalar(g, h, nl) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("solution map is monotone and Lipschitz in g") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> dg(-10.0, 10.0);
  const auto all = shipped();
  for (int k = 0; k < 10000; ++k) {
    const Nonlinearity& nl = all[static_cast<std::size_t>(k) % all.size()];
    const double h = valid_h(rng, nl.pi_lip);
    double a = dg(rng), b = dg(rng);
    if (a > b) std::swap(a, b);
    const double ra = solve_scalar(a, h, nl), rb = solve_scalar(b, h, nl);
    CHECK(ra <= rb);
    CHECK(std::abs(rb - ra) <= (b - a) * scalar_lipschitz(h, nl.pi_lip) + 1e-8);
    CHECK(scalar_lipschitz(h, nl.pi_lip) == doctest::Approx(1.0 / (1.0 + h - nl.pi_lip * h * h)));
  }
}

TEST_CASE("perturbation by ell h^2 delta is damped by the Lipschitz constant") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> dg(-5.0, 5.0), dd(-2.0, 2.0);
  const auto all = shipped();
  const double ell = 1.3;
  for (int k = 0; k < 5000; ++k) {
    const Nonlinearity& nl = all[static_cast<std::size_t>(k) % all.size()];
    const double h = valid_h(rng, nl.pi_lip), g = dg(rng), delta = dd(rng);
    const double diff = std::abs(solve_scalar(g + ell * h * h * delta, h, nl) - solve_scalar(g, h, nl));
    CHECK(diff <= ell * h * h * std::abs(delta) / (1.0 + h - nl.pi_lip * h * h) + 1e-10);
  }
}

TEST_CASE("solve_field is nodewise") {
  Nonlinearity nl = nonlinearities::cubic();
  nonlinearities::set_zero_pi(nl);
  CHECK(norm_Linf(solve_field(GridFunction::Zero(16), 0.2, nl)) == 0.0);
  const GridFunction c = solve_field(GridFunction::Constant(16, 0.8), 0.2, nl);
  for (Eigen::Index i = 0; i < 16; ++i) CHECK(c[i] == solve_scalar(0.8, 0.2, nl));

  nonlinearities::set_linear_pi(nl, 1.0, 0.3);
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> dg(-3.0, 3.0);
  GridFunction g(16);
  for (Eigen::Index i = 0; i < 16; ++i) g[i] = dg(rng);
  const GridFunction r = solve_field(g, 0.4, nl);
  for (Eigen::Index i = 0; i < 16; ++i) CHECK(std::abs(r[i] - oracle_root(g[i], 0.4, nl)) <= 1e-12);
}

TEST_CASE("a non-monotone residual map is refused") {
  Nonlinearity nl = nonlinearities::zero_beta();
  nonlinearities::set_linear_pi(nl, 10.0, 0.0);
  CHECK_THROWS_AS(solve_scalar(1.0, 0.5, nl), BracketFailure);
  GridFunction g = GridFunction::Zero(4);
  try {
    solve_field(g, 0.5, nl);
    FAIL("expected BracketFailure");
  } catch (const BracketFailure& e) {
    CHECK(e.node() == 0);
  }
}
