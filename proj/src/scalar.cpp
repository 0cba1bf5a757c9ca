#include "nlpf/scalar.hpp"

#include "nlpf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlpf {

double scalar_lipschitz(double h, double pi_lip) { return 1.0 / (1.0 + h - pi_lip * h * h); }

double solve_scalar(double g, double h, const Nonlinearity& nl, const ScalarSolveConfig& cfg) {
  if (!(h > 0.0)) throw std::invalid_argument("solve_scalar: h must be positive");
  if (!(1.0 + h - nl.pi_lip * h * h > 0.0)) throw BracketFailure(g, h);
  const double h2 = h * h;
  auto q = [&](double r) { return (1.0 + h) * r + h2 * nl.beta(r) + h2 * nl.pi(r) - g; };
  auto dq = [&](double r) { return (1.0 + h) + h2 * nl.beta_prime(r) + h2 * nl.pi_prime(r); };

  const double centre = g / (1.0 + h);
  double lo = std::min(0.0, centre) - 1.0;
  double hi = std::max(0.0, centre) + 1.0;
  double qlo = q(lo), qhi = q(hi);
  double step = hi - lo;
  for (int k = 0; qlo > 0.0; ++k) {
    if (k >= cfg.max_expansions || !std::isfinite(qlo)) throw BracketFailure(g, h);
    hi = lo;
    qhi = qlo;
    lo -= step;
    step *= cfg.bracket_growth;
    qlo = q(lo);
  }
  step = hi - lo;
  for (int k = 0; qhi < 0.0; ++k) {
    if (k >= cfg.max_expansions || !std::isfinite(qhi)) throw BracketFailure(g, h);
    lo = hi;
    qlo = qhi;
    hi += step;
    step *= cfg.bracket_growth;
    qhi = q(hi);
  }
  if (qlo == 0.0) return lo;
  if (qhi == 0.0) return hi;

  const double tol = cfg.tol_rel * std::max(1.0, std::abs(g));
  double r = std::clamp(centre, lo, hi);
  double qr = q(r);
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (qr == 0.0) return r;
    if (qr < 0.0)
      lo = r;
    else
      hi = r;
    const double d = dq(r);
    double next = r - qr / d;
    // Newton leaving the bracket (or stalling) falls back to bisection.
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double moved = std::abs(next - r);
    r = next;
    qr = q(r);
    if (std::abs(qr) <= tol && moved <= 1e-15 * std::max(1.0, std::abs(r))) return r;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(r))) return r;
  }
  if (std::abs(qr) <= tol) return r;
  throw NoConvergence("solve_scalar", cfg.max_iter, std::abs(qr));
}

GridFunction solve_field(const GridFunction& g, double h, const Nonlinearity& nonlin, const ScalarSolveConfig& cfg) {
  GridFunction out(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    try {
      out[i] = solve_scalar(g[i], h, nonlin, cfg);
    } catch (const BracketFailure&) {
      throw BracketFailure(g[i], h, static_cast<std::ptrdiff_t>(i));
    }
  }
  return out;
}

}  // namespace nlpf
