#pragma once

#include "nlpf/stepper.hpp"

#include <functional>
#include <map>
#include <string>
#include <string_view>

namespace nlpf {

/// Time reconstructions of a trajectory. hat_* are piecewise linear between
/// levels; bar_* take the level-(n+1) value on (nh, (n+1)h]; under_phi takes
/// the level-n value there.
enum class InterpolantKind { hat_u, hat_phi, hat_v, bar_u, bar_theta, bar_phi, under_phi, bar_v, bar_z, bar_f };

std::string_view to_string(InterpolantKind kind);
bool is_hat(InterpolantKind kind);

/// Read-only view; the trajectory must outlive it.
class InterpolantView {
 public:
  InterpolantView(const Trajectory& traj, InterpolantKind kind) : traj_(&traj), kind_(kind) {}

  InterpolantKind kind() const { return kind_; }
  /// Throws OutOfRange for t outside [0, T].
  GridFunction eval(double t) const;

 private:
  const Trajectory* traj_;
  InterpolantKind kind_;
};

GridFunction eval(const Trajectory& traj, InterpolantKind kind, double t);

/// Level data accessors used by the reconstructions.
const GridFunction& level_value(const Trajectory& traj, InterpolantKind kind, int n);

/// Integral over [0, 1] of <a + s b, a + s b> for an inner product.
double affine_square_integral(const GridFunction& a, const GridFunction& b,
                              const std::function<double(const GridFunction&, const GridFunction&)>& inner);

/// Relative defect of every exact reconstruction identity on a trajectory:
///   hat_u_sup       sup_t ||u_hat||_H = max(||u_0||_H, sup_t ||u_bar||_H)
///   hat_phi_sup     same for phi_hat in L^inf(L^inf)
///   hat_v_sup       same for v_hat in L^inf(L^inf)
///   u_gap_l2vstar   ||u_bar - u_hat||^2_{L2(V*)} = (h^2/3) ||u_hat_t||^2_{L2(V*)}
///   phi_gap_sup     ||phi_bar - phi_hat||_{L^inf(L^inf)} = h ||v_bar||_{L^inf(L^inf)}
///   v_gap_l2h       ||v_bar - v_hat||^2_{L2(H)} = (h^2/3) ||v_hat_t||^2_{L2(H)}
///   v_gap_z         (h^2/3) ||v_hat_t||^2_{L2(H)} = (h^2/3) ||z_bar||^2_{L2(H)}
///   under_phi       phi_under = phi_bar - h phi_hat_t nodewise
std::map<std::string, double> verify_identities(const Trajectory& traj);

}  // namespace nlpf
