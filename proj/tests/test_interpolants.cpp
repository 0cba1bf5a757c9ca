#include "nlpf/errors.hpp"
#include "nlpf/interpolants.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <random>

using namespace nlpf;

namespace {

// Random levels with v and z consistent with phi and v, as the scheme stores them.
Trajectory synthetic(int N, double h, std::uint64_t seed, bool frozen_u = false) {
  ProblemSpec s = fixtures::constant_spec(12, 1.0, 0.0, 0.0);
  auto pd = std::make_shared<const ProblemData>(s);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  auto rnd = [&] {
    GridFunction u = s.grid.zeros();
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = d(rng);
    return u;
  };
  Trajectory t;
  t.problem = pd;
  t.h = h;
  t.N = N;
  StepState s0;
  s0.theta = rnd().array().abs().matrix() + s.grid.constant(0.5);
  s0.phi = rnd();
  s0.v = rnd();
  s0.u = rnd();
  t.states.push_back(s0);
  t.z.push_back(s.grid.zeros());
  t.f.push_back(s.grid.zeros());
  for (int n = 1; n <= N; ++n) {
    const StepState& p = t.states.back();
    StepState st;
    st.n = n;
    st.theta = rnd().array().abs().matrix() + s.grid.constant(0.5);
    st.phi = rnd();
    st.v = (st.phi - p.phi) / h;
    st.u = frozen_u ? p.u : rnd();
    t.z.push_back((st.v - p.v) / h);
    t.f.push_back(rnd());
    t.states.push_back(st);
  }
  return t;
}

}  // namespace

TEST_CASE("evaluation at and between breakpoints") {
  const Trajectory t = synthetic(5, 0.2, 1);
  for (int n = 0; n <= 5; ++n) {
    CHECK(norm_Linf(eval(t, InterpolantKind::hat_phi, n * 0.2) - t.states[n].phi) == 0.0);
    if (n < 5) {
      CHECK(norm_Linf(eval(t, InterpolantKind::bar_theta, (n + 0.5) * 0.2) - t.states[n + 1].theta) == 0.0);
      CHECK(norm_Linf(eval(t, InterpolantKind::under_phi, (n + 0.5) * 0.2) - t.states[n].phi) == 0.0);
      const GridFunction mix = 0.75 * t.states[n].v + 0.25 * t.states[n + 1].v;
      CHECK(norm_Linf(eval(t, InterpolantKind::hat_v, (n + 0.25) * 0.2) - mix) <= 1e-14);
    }
  }
  // Bar kinds are right-continuous: at t = nh they take the level-n value.
  CHECK(norm_Linf(eval(t, InterpolantKind::bar_v, 0.4) - t.states[2].v) == 0.0);
  CHECK(norm_Linf(eval(t, InterpolantKind::bar_z, 0.0) - t.z[1]) == 0.0);
  CHECK_THROWS_AS(eval(t, InterpolantKind::hat_u, -0.01), OutOfRange);
  CHECK_THROWS_AS(eval(t, InterpolantKind::hat_u, 1.01), OutOfRange);
  const InterpolantView view(t, InterpolantKind::bar_f);
  CHECK(norm_Linf(view.eval(0.3) - t.f[2]) == 0.0);
}

TEST_CASE("identities hold on synthetic trajectories") {
  for (std::uint64_t seed : {2u, 3u, 4u}) {
    for (const auto& [k, v] : verify_identities(synthetic(3, 0.1, seed))) {
      INFO(k);
      CHECK(v <= 1e-12);
    }
  }
}

TEST_CASE("frozen u gives zero time-difference defects") {
  const auto m = verify_identities(synthetic(1, 0.5, 5, true));
  CHECK(m.at("u_gap_l2vstar") == 0.0);
  CHECK(m.at("hat_u_sup") == 0.0);
}

TEST_CASE("u gap in L2(V*) against Gauss-Legendre quadrature in time") {
  const Trajectory t = synthetic(4, 0.25, 6);
  const DualNorm& dual = t.problem->dual();
  // Three-point Gauss-Legendre is exact for the quadratic integrand on each piece.
  const double nodes[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double gap = 0.0, rate = 0.0;
  for (int n = 0; n < 4; ++n) {
    for (int q = 0; q < 3; ++q) {
      const double tq = (n + 0.5 + 0.5 * nodes[q]) * t.h;
      const GridFunction diff = eval(t, InterpolantKind::bar_u, tq) - eval(t, InterpolantKind::hat_u, tq);
      gap += 0.5 * t.h * weights[q] * dual.inner(diff, diff);
    }
    const GridFunction du = (t.states[n + 1].u - t.states[n].u) / t.h;
    rate += t.h * dual.inner(du, du);
  }
  CHECK(gap == doctest::Approx(t.h * t.h / 3.0 * rate).epsilon(1e-12));
  CHECK(verify_identities(t).at("u_gap_l2vstar") <= 1e-12);
}

TEST_CASE("affine square integral") {
  const GridFunction a = GridFunction::Constant(3, 2.0), b = GridFunction::Constant(3, -1.0);
  auto dot = [](const GridFunction& x, const GridFunction& y) { return x.dot(y); };
  // int_0^1 3 (2 - s)^2 ds = 3 * 7/3.
  CHECK(affine_square_integral(a, b, dot) == doctest::Approx(7.0));
}

TEST_CASE("identities hold on a computed trajectory") {
  const Trajectory t = run(fixtures::default_problem(), 16);
  for (const auto& [k, v] : verify_identities(t)) {
    INFO(k);
    CHECK(v <= 1e-10);
  }
}
