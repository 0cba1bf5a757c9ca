#include "nlpf/elliptic.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace nlpf;

namespace {

// Two nodes on (0, 1) with mirror ghosts: (Delta u)_0 = 2(u_1 - u_0), (Delta u)_1 = 2(u_0 - u_1).
// Solves eps t + ln_tau(t) - k Delta t = g by eliminating t_1 from the first row and bisecting on t_0.
std::array<double, 2> two_node_oracle(double eps, double k, double tau, std::array<double, 2> g) {
  auto L = [&](double x) {
    if (tau > 0.0) return oracle::yosida_ln(x, tau);
    return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
  };
  auto t1_of = [&](double t0) { return (g[0] - eps * t0 - L(t0)) / (-2.0 * k) + t0; };
  auto F = [&](double t0) {
    const double t1 = t1_of(t0);
    if (tau == 0.0 && !(t1 > 0.0)) return -std::numeric_limits<double>::infinity();
    return eps * t1 + L(t1) - 2.0 * k * (t0 - t1) - g[1];
  };
  double lo = tau > 0.0 ? -50.0 : 1e-12, hi = 50.0;
  const double t0 = oracle::bisect(F, lo, hi, 3000);
  return {t0, t1_of(t0)};
}

GridFunction random_field(const Grid& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  GridFunction u = g.zeros();
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = d(rng);
  return u;
}

}  // namespace

TEST_CASE("yosida_ln fixes 1 exactly") {
  for (double tau : {1.0, 1e-3, 1e-8}) CHECK(yosida_ln(1.0, tau) == 0.0);
}

TEST_CASE("yosida_ln against a bisection resolvent") {
  const double r = oracle::bisect([](double x) { return x + std::log(x) - 2.0; }, 1.0, 2.0);
  CHECK(yosida_ln(2.0, 1.0) == doctest::Approx(2.0 - r).epsilon(1e-14));
  CHECK(std::abs(yosida_ln(2.0, 1e-8) - std::log(2.0)) <= 1e-6);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-20.0, 20.0), lt(-8.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double x = d(rng), tau = std::pow(10.0, lt(rng));
    CHECK(yosida_ln(x, tau) == doctest::Approx(oracle::yosida_ln(x, tau)).epsilon(1e-10));
  }
}

TEST_CASE("yosida_ln converges to ln and never exceeds it in magnitude") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> lx(-3.0, 3.0), lall(-12.0, 12.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = std::pow(10.0, lx(rng));
    CHECK(std::abs(yosida_ln(x, 1e-12) - std::log(x)) <= 1e-6);
  }
  for (double tau : {1.0, 1e-2, 1e-6}) {
    for (int k = 0; k < 10000; ++k) {
      const double x = std::pow(10.0, lall(rng));
      CHECK(std::abs(yosida_ln(x, tau)) <= std::abs(std::log(x)) * (1 + 1e-14) + 1e-300);
    }
  }
}

TEST_CASE("yosida_ln deviation from ln grows like tau |ln x| / x for small x") {
  // Uniform samples on [1e-3, 1e3] almost never land here, but the exact
  // Yosida value misses ln x by far more than 1e-6 at the left end.
  for (double x : {1e-3, 1e-2}) {
    const double dev = yosida_ln(x, 1e-8) - std::log(x);
    CHECK(dev == doctest::Approx(1e-8 * std::abs(std::log(x)) / x).epsilon(1e-3));
  }
  CHECK(yosida_ln(1e-3, 1e-8) - std::log(1e-3) > 1e-6);
  CHECK(std::abs(std::log(0.05) - yosida_ln(0.05, 1e-8)) < 1e-6);
}

TEST_CASE("yosida_ln is monotone and 1/tau Lipschitz") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (double tau : {1.0, 1e-2, 1e-5}) {
    for (int k = 0; k < 2000; ++k) {
      double a = d(rng), b = d(rng);
      if (a > b) std::swap(a, b);
      const double fa = yosida_ln(a, tau), fb = yosida_ln(b, tau);
      CHECK(fa <= fb);
      CHECK(fb - fa <= (b - a) / tau * (1 + 1e-10) + 1e-14);
      CHECK(yosida_ln_prime(a, tau) <= 1.0 / tau);
    }
  }
}

TEST_CASE("discrete pairing of -Delta with ln_tau is nonnegative") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> lu(-3.0, 3.0);
  for (const Grid& g : {Grid(24, 1.0), Grid(9, 12, 1.0, 1.5)}) {
    const NeumannLaplacian lap(g);
    for (double tau : {1.0, 1e-2, 1e-6}) {
      for (int k = 0; k < 1000; ++k) {
        GridFunction u = g.zeros(), lu_tau = g.zeros();
        for (Eigen::Index i = 0; i < u.size(); ++i) {
          u[i] = std::pow(10.0, lu(rng));
          lu_tau[i] = yosida_ln(u[i], tau);
        }
        CHECK(-inner_H(g, lap.apply(u), lu_tau) >= -1e-12);
      }
    }
  }
}

TEST_CASE("constant data is reproduced exactly") {
  const Grid g(32, 1.0);
  const NeumannLaplacian lap(g);
  EllipticSolver solver(g, lap);
  for (double eps : {1.0, 0.1}) {
    for (double c : {3.0, 0.2, 1.0}) {
      const EllipticSolveReport rep = solver.solve(g.constant(eps * c + std::log(c)), eps, 1.0, 0.1);
      CHECK(norm_Linf(rep.theta - g.constant(c)) <= 1e-10);
      CHECK(rep.residual_H <= 1e-10 * (1 + norm_H(g, g.constant(eps * c + std::log(c)))));
      CHECK(rep.min_theta > 0.0);
      for (double tau : {1.0, 1e-4}) {
        const GridFunction t = solver.solve_regularized(g.constant(eps * c + yosida_ln(c, tau)), eps, 1.0, 0.1, tau);
        CHECK(norm_Linf(t - g.constant(c)) <= 1e-10);
      }
    }
  }
  for (double tau : {1.0, 1e-3})
    for (double eh : {0.01, 1.0})
      CHECK(norm_Linf(solver.solve_regularized(g.constant(0.5), 0.5, eh, 1.0, tau) - g.constant(1.0)) <= 1e-12);
}

TEST_CASE("two initial guesses give the same solution") {
  const Grid g(20, 1.0);
  const NeumannLaplacian lap(g);
  EllipticSolver solver(g, lap);
  std::mt19937_64 rng(37);
  for (int k = 0; k < 10; ++k) {
    const GridFunction rhs = random_field(g, rng, -3.0, 3.0);
    const GridFunction a = random_field(g, rng, 0.01, 5.0), b = random_field(g, rng, 0.01, 5.0);
    const GridFunction ta = solver.solve_from(rhs, 0.3, 1.0, 0.05, a).theta;
    const GridFunction tb = solver.solve_from(rhs, 0.3, 1.0, 0.05, b).theta;
    CHECK(norm_H(g, ta - tb) <= 1e-9);
    const GridFunction ra = solver.solve_regularized(rhs, 0.3, 1.0, 0.05, 1e-3, &a);
    const GridFunction rb = solver.solve_regularized(rhs, 0.3, 1.0, 0.05, 1e-3, &b);
    CHECK(norm_H(g, ra - rb) <= 1e-9);
  }
}

TEST_CASE("comparison principle on ordered data") {
  const Grid g(16, 1.0);
  const NeumannLaplacian lap(g);
  EllipticSolver solver(g, lap);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> gap(0.0, 0.5);
  for (int k = 0; k < 100; ++k) {
    const GridFunction g1 = random_field(g, rng, -4.0, 3.0);
    GridFunction g2 = g1;
    for (Eigen::Index i = 0; i < g2.size(); ++i) g2[i] += gap(rng);
    const GridFunction t1 = solver.solve(g1, 0.5, 1.0, 0.1).theta;
    const GridFunction t2 = solver.solve(g2, 0.5, 1.0, 0.1).theta;
    CHECK((t2 - t1).minCoeff() >= -1e-12);
  }
}

TEST_CASE("two unknowns against the eliminated-bisection oracle") {
  const Grid g(2, 1.0);
  const NeumannLaplacian lap(g);
  EllipticSolver solver(g, lap);
  GridFunction rhs(2);
  rhs << 0.0, 2.0;
  const auto reg = two_node_oracle(1.0, 1.0, 1.0, {0.0, 2.0});
  const GridFunction t = solver.solve_regularized(rhs, 1.0, 1.0, 1.0, 1.0);
  CHECK(std::abs(t[0] - reg[0]) <= 1e-10);
  CHECK(std::abs(t[1] - reg[1]) <= 1e-10);
  // eta h = 0.5 * 2 = 1 through a different split of the coefficient.
  const GridFunction t_split = solver.solve_regularized(rhs, 1.0, 0.5, 2.0, 1.0);
  CHECK(norm_Linf(t_split - t) <= 1e-12);

  const auto exact = two_node_oracle(1.0, 1.0, 0.0, {0.0, 2.0});
  const EllipticSolveReport rep = solver.solve(rhs, 1.0, 1.0, 1.0);
  CHECK(std::abs(rep.theta[0] - exact[0]) <= 1e-10);
  CHECK(std::abs(rep.theta[1] - exact[1]) <= 1e-10);

  GridFunction rhs2(2);
  rhs2 << -1.5, 0.7;
  const auto exact2 = two_node_oracle(0.2, 0.3, 0.0, {-1.5, 0.7});
  const EllipticSolveReport rep2 = solver.solve(rhs2, 0.2, 3.0, 0.1);
  CHECK(std::abs(rep2.theta[0] - exact2[0]) <= 1e-10);
  CHECK(std::abs(rep2.theta[1] - exact2[1]) <= 1e-10);
}

TEST_CASE("the continuation path agrees with a tiny-tau regularized solve") {
  const Grid g(32, 1.0);
  const NeumannLaplacian lap(g);
  EllipticSolver solver(g, lap);
  const double eps = 0.5;
  GridFunction rhs = g.constant(eps);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coords(i)[0];
    rhs[static_cast<Eigen::Index>(i)] += std::sin(3.14159265358979 * x) * std::exp(-20 * (x - 0.5) * (x - 0.5));
  }
  const EllipticSolveReport rep = solver.solve(rhs, eps, 1.0, 0.1);
  const GridFunction reg = solver.solve_regularized(rhs, eps, 1.0, 0.1, 1e-10, &rep.theta);
  CHECK(norm_H(g, rep.theta - reg) <= 1e-8);
  CHECK(norm_H(g, solver.residual(rep.theta, rhs, eps, 1.0, 0.1)) <= 1e-10 * (1 + norm_H(g, rhs)));
}

TEST_CASE("tau schedule runs from tau_start down to tau_min") {
  const std::vector<double> s = tau_schedule(EllipticSettings{});
  REQUIRE(!s.empty());
  CHECK(s.front() == doctest::Approx(0.1));
  CHECK(s.back() >= 1e-10);
  CHECK(s.back() < 4e-10);
  for (std::size_t k = 1; k < s.size(); ++k) CHECK(s[k] == doctest::Approx(s[k - 1] / 4.0));
}
