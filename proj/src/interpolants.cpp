#include "nlpf/interpolants.hpp"

#include "nlpf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nlpf {

std::string_view to_string(InterpolantKind kind) {
  switch (kind) {
    case InterpolantKind::hat_u: return "hat_u";
    case InterpolantKind::hat_phi: return "hat_phi";
    case InterpolantKind::hat_v: return "hat_v";
    case InterpolantKind::bar_u: return "bar_u";
    case InterpolantKind::bar_theta: return "bar_theta";
    case InterpolantKind::bar_phi: return "bar_phi";
    case InterpolantKind::under_phi: return "under_phi";
    case InterpolantKind::bar_v: return "bar_v";
    case InterpolantKind::bar_z: return "bar_z";
    case InterpolantKind::bar_f: return "bar_f";
  }
  return "?";
}

bool is_hat(InterpolantKind kind) {
  return kind == InterpolantKind::hat_u || kind == InterpolantKind::hat_phi || kind == InterpolantKind::hat_v;
}

const GridFunction& level_value(const Trajectory& traj, InterpolantKind kind, int n) {
  const auto idx = static_cast<std::size_t>(n);
  switch (kind) {
    case InterpolantKind::hat_u:
    case InterpolantKind::bar_u: return traj.states.at(idx).u;
    case InterpolantKind::hat_phi:
    case InterpolantKind::bar_phi:
    case InterpolantKind::under_phi: return traj.states.at(idx).phi;
    case InterpolantKind::hat_v:
    case InterpolantKind::bar_v: return traj.states.at(idx).v;
    case InterpolantKind::bar_theta: return traj.states.at(idx).theta;
    case InterpolantKind::bar_z: return traj.z.at(idx);
    case InterpolantKind::bar_f: return traj.f.at(idx);
  }
  throw OutOfRange("unknown interpolant kind");
}

GridFunction eval(const Trajectory& traj, InterpolantKind kind, double t) {
  const double T = traj.T();
  if (!(t >= 0.0) || t > T * (1.0 + 1e-14)) throw OutOfRange("interpolant time outside [0, T]");
  const double k = std::min(t / traj.h, static_cast<double>(traj.N));
  const double r = std::round(k);
  const bool at_break = std::abs(k - r) <= 1e-12 * std::max(1.0, k);
  const int rn = static_cast<int>(r);
  const int fl = std::min(static_cast<int>(std::floor(k)), traj.N - 1);

  if (is_hat(kind)) {
    if (at_break) return level_value(traj, kind, rn);
    const double s = k - fl;
    const GridFunction& a = level_value(traj, kind, fl);
    const GridFunction& b = level_value(traj, kind, fl + 1);
    return a + s * (b - a);
  }
  if (kind == InterpolantKind::under_phi) return level_value(traj, kind, at_break ? std::max(rn, 1) - 1 : fl);
  return level_value(traj, kind, at_break ? std::max(rn, 1) : fl + 1);
}

GridFunction InterpolantView::eval(double t) const { return nlpf::eval(*traj_, kind_, t); }

double affine_square_integral(const GridFunction& a, const GridFunction& b,
                              const std::function<double(const GridFunction&, const GridFunction&)>& inner) {
  return inner(a, a) + inner(a, b) + inner(b, b) / 3.0;
}

namespace {

double rel(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

std::map<std::string, double> verify_identities(const Trajectory& traj) {
  const Grid& grid = traj.grid();
  const DualNorm& dual = traj.problem->dual();
  const double h = traj.h;
  const int N = traj.N;
  auto inner_h = [&](const GridFunction& a, const GridFunction& b) { return inner_H(grid, a, b); };
  auto inner_vs = [&](const GridFunction& a, const GridFunction& b) { return dual.inner(a, b); };
  const auto& S = traj.states;

  std::map<std::string, double> out;

  // sup of ||u_n + s D||^2 on each piece via its quadratic expansion.
  double hat_u_sup = 0.0;
  for (int n = 0; n < N; ++n) {
    const GridFunction d = S[n + 1].u - S[n].u;
    const double A = inner_h(S[n].u, S[n].u);
    const double B = inner_h(S[n].u, d);
    const double C = inner_h(d, d);
    hat_u_sup = std::max({hat_u_sup, A, A + 2.0 * B + C});
  }
  double bar_u_sup = 0.0;
  for (int n = 1; n <= N; ++n) bar_u_sup = std::max(bar_u_sup, norm_H(grid, S[n].u));
  out["hat_u_sup"] = rel(std::sqrt(hat_u_sup), std::max(norm_H(grid, S[0].u), bar_u_sup));

  double hat_phi = 0.0, bar_phi = 0.0, hat_v = 0.0, bar_v = 0.0;
  for (int n = 0; n < N; ++n) {
    hat_phi = std::max({hat_phi, norm_Linf(S[n].phi), norm_Linf(S[n].phi + h * S[n + 1].v)});
    hat_v = std::max({hat_v, norm_Linf(S[n].v), norm_Linf(S[n].v + h * traj.z[n + 1])});
    bar_phi = std::max(bar_phi, norm_Linf(S[n + 1].phi));
    bar_v = std::max(bar_v, norm_Linf(S[n + 1].v));
  }
  out["hat_phi_sup"] = rel(hat_phi, std::max(norm_Linf(S[0].phi), bar_phi));
  out["hat_v_sup"] = rel(hat_v, std::max(norm_Linf(S[0].v), bar_v));

  double u_gap = 0.0, u_rate = 0.0, v_gap = 0.0, v_rate = 0.0, z_sq = 0.0, phi_gap = 0.0, under = 0.0,
         phi_scale = 0.0;
  for (int n = 0; n < N; ++n) {
    const GridFunction du = S[n + 1].u - S[n].u;
    u_gap += h * affine_square_integral(du, -du, inner_vs);
    u_rate += h * inner_vs(du / h, du / h);
    const GridFunction dv = S[n + 1].v - S[n].v;
    v_gap += h * affine_square_integral(dv, -dv, inner_h);
    v_rate += h * inner_h(dv / h, dv / h);
    z_sq += h * inner_h(traj.z[n + 1], traj.z[n + 1]);
    phi_gap = std::max(phi_gap, norm_Linf(S[n + 1].phi - S[n].phi));
    under = std::max(under, norm_Linf(S[n].phi - (S[n + 1].phi - h * S[n + 1].v)));
    phi_scale = std::max({phi_scale, norm_Linf(S[n].phi), norm_Linf(S[n + 1].phi)});
  }
  out["u_gap_l2vstar"] = rel(u_gap, h * h / 3.0 * u_rate);
  out["phi_gap_sup"] = rel(phi_gap, h * bar_v);
  out["v_gap_l2h"] = rel(v_gap, h * h / 3.0 * v_rate);
  out["v_gap_z"] = rel(h * h / 3.0 * v_rate, h * h / 3.0 * z_sq);
  out["under_phi"] = phi_scale == 0.0 ? 0.0 : under / phi_scale;
  return out;
}

}  // namespace nlpf
