#include "nlpf/io.hpp"

#include "nlpf/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlpf {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// json cannot hold non-finite numbers; those become strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

void require_levels(const Trajectory& traj) {
  if (traj.N < 1 || traj.states.size() != static_cast<std::size_t>(traj.N) + 1)
    throw std::invalid_argument("emit: trajectory has no steps");
}

template <class Writer>
void write_file(const fs::path& dir, const std::string& name, Writer&& writer) {
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<TrajectoryRow> trajectory_rows(const Trajectory& traj) {
  const Grid& grid = traj.grid();
  std::vector<TrajectoryRow> rows;
  for (const StepState& s : traj.states) {
    TrajectoryRow r;
    r.n = s.n;
    r.t = s.n == traj.N ? traj.T() : s.n * traj.h;
    r.theta_H = norm_H(grid, s.theta);
    r.theta_min = s.theta.minCoeff();
    r.theta_max = s.theta.maxCoeff();
    r.phi_H = norm_H(grid, s.phi);
    r.phi_Linf = norm_Linf(s.phi);
    r.v_H = norm_H(grid, s.v);
    r.v_Linf = norm_Linf(s.v);
    r.u_H = norm_H(grid, s.u);
    rows.push_back(r);
  }
  return rows;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "n,t,theta_H,theta_min,theta_max,phi_H,phi_Linf,v_H,v_Linf,u_H\n";
  for (const TrajectoryRow& r : trajectory_rows(traj)) {
    out << r.n;
    for (double v : {r.t, r.theta_H, r.theta_min, r.theta_max, r.phi_H, r.phi_Linf, r.v_H, r.v_Linf, r.u_H})
      out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trajectory.csv: missing header");
  std::vector<TrajectoryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) throw std::runtime_error("trajectory.csv: expected 10 columns in '" + line + "'");
    TrajectoryRow r;
    r.n = std::stoi(cells[0]);
    double* fields[] = {&r.t, &r.theta_H, &r.theta_min, &r.theta_max, &r.phi_H, &r.phi_Linf, &r.v_H, &r.v_Linf, &r.u_H};
    for (std::size_t i = 0; i < 9; ++i) *fields[i] = std::strtod(cells[i + 1].c_str(), nullptr);
    rows.push_back(r);
  }
  return rows;
}

void write_steps_ndjson(const Trajectory& traj, std::ostream& out) {
  for (const StepReport& r : traj.reports) {
    json updates = json::array();
    for (double u : r.updates) updates.push_back(num(u));
    json j = {{"n", r.n},
              {"fixed_point_iters", r.fixed_point_iters},
              {"last_update_H", num(r.last_update_H)},
              {"contraction_ratio_measured", num(r.contraction_ratio_measured)},
              {"kappa_theory", num(r.kappa_theory)},
              {"updates", updates},
              {"newton_iters", r.newton_iters},
              {"defect_eq1_vstar", num(r.defect_eq1_vstar)},
              {"defect_eq2_H", num(r.defect_eq2_H)},
              {"min_theta", num(r.min_theta)}};
    out << j.dump() << '\n';
  }
}

void write_diagnostics_csv(const Trajectory& traj, const DiagnosticsReport& rep, std::ostream& out) {
  out << "m,t,theta_sq,theta_mass,grad_cum,phi_sq,v_sq,beta_hat_int,lhs,rhs_balance,rhs_split,rhs_gronwall,"
         "entropy_defect,phi_Linf,v_Linf,cum_sum_H,cum_laplacian_H,identity_defect,u_H,u_recomputed_H\n";
  for (std::size_t m = 0; m < rep.energy.size(); ++m) {
    const EnergyRow& e = rep.energy[m];
    const CumulativeRow& c = rep.cumulative[m];
    out << e.m << ',' << format_double(static_cast<int>(m) == traj.N ? traj.T() : e.m * traj.h);
    for (double v : {e.theta_sq, e.theta_mass, e.grad_cum, e.phi_sq, e.v_sq, e.beta_hat_int, e.lhs, e.rhs_balance,
                     e.rhs_split, e.rhs_gronwall})
      out << ',' << format_double(v);
    out << ',';
    if (m > 0) out << format_double(rep.entropy_defects[m - 1]);
    for (double v : {rep.linf.phi[m], rep.linf.v[m], c.sum_H, c.sum_laplacian_H, c.identity_defect, rep.u_norm[m],
                     rep.u_recomputed_norm[m]})
      out << ',' << format_double(v);
    out << '\n';
  }
}

void write_diagnostics_ndjson(const Trajectory& traj, const DiagnosticsReport& rep, std::ostream& out) {
  for (std::size_t m = 0; m < rep.energy.size(); ++m) {
    const EnergyRow& e = rep.energy[m];
    const CumulativeRow& c = rep.cumulative[m];
    json j = {{"record", "level"},
              {"m", e.m},
              {"theta_sq", num(e.theta_sq)},
              {"theta_mass", num(e.theta_mass)},
              {"grad_cum", num(e.grad_cum)},
              {"phi_sq", num(e.phi_sq)},
              {"v_sq", num(e.v_sq)},
              {"beta_hat_int", num(e.beta_hat_int)},
              {"lhs", num(e.lhs)},
              {"rhs_balance", num(e.rhs_balance)},
              {"rhs_split", num(e.rhs_split)},
              {"rhs_gronwall", num(e.rhs_gronwall)},
              {"phi_Linf", num(rep.linf.phi[m])},
              {"v_Linf", num(rep.linf.v[m])},
              {"cum_sum_H", num(c.sum_H)},
              {"cum_laplacian_H", num(c.sum_laplacian_H)},
              {"identity_defect", num(c.identity_defect)},
              {"u_H", num(rep.u_norm[m])},
              {"u_recomputed_H", num(rep.u_recomputed_norm[m])}};
    if (m > 0) j["entropy_defect"] = num(rep.entropy_defects[m - 1]);
    out << j.dump() << '\n';
  }
  const double min_defect =
      rep.entropy_defects.empty() ? 0.0 : *std::min_element(rep.entropy_defects.begin(), rep.entropy_defects.end());
  json s = {{"record", "summary"},
            {"N", traj.N},
            {"h", num(traj.h)},
            {"z_l2", num(rep.z_l2)},
            {"min_theta", num(rep.min_theta)},
            {"min_entropy_defect", num(min_defect)},
            {"phi_Linf_max", num(rep.linf.phi_max)},
            {"v_Linf_max", num(rep.linf.v_max)}};
  out << s.dump() << '\n';
}

void write_study_csv(const CauchyStudy& study, std::ostream& out) {
  out << "kind,a,b,h_a,h_b,phi_hat_CH,v_hat_CH,v_bar_L2H,v_hat_L2Vstar,lhs,shape,fitted_C,bound,holds\n";
  for (const StudyRow& r : study.rows) {
    out << study.kind;
    for (double v : {r.a, r.b, r.h_a, r.h_b, r.metrics.phi_hat_CH, r.metrics.v_hat_CH, r.metrics.v_bar_L2H,
                     r.metrics.v_hat_L2Vstar, r.lhs, r.shape, study.fitted_C, r.bound})
      out << ',' << format_double(v);
    out << ',' << (r.holds ? 1 : 0) << '\n';
  }
}

void write_uniform_csv(const CauchyStudy& study, std::ostream& out) {
  out << "eps,sqrt_eps_theta_LinfH,theta_L2V,log_theta_LinfH,phi_W22,phi_W1inf\n";
  for (const UniformQuantities& q : study.uniform) {
    out << format_double(q.eps);
    for (double v : {q.sqrt_eps_theta_LinfH, q.theta_L2V, q.log_theta_LinfH, q.phi_W22, q.phi_W1inf})
      out << ',' << format_double(v);
    out << '\n';
  }
}

std::string study_summary(const CauchyStudy& study) {
  std::ostringstream s;
  const bool eps = study.kind == "eps";
  s << "study: cauchy-" << study.kind << '\n';
  s << "pairs: " << study.rows.size() << '\n';
  s << "inequality shape: " << (eps ? "lhs <= C sqrt(V*)" : "lhs <= C (sqrt(h_a) + sqrt(h_b) + sqrt(V*))") << '\n';
  s << "fitted C (coarsest pair): " << format_double(study.fitted_C) << '\n';
  s << "inequality holds for every pair: " << (study.inequality_holds ? "yes" : "no") << '\n';
  if (study.slope_fitted) {
    s << "phi C(H) slope: " << format_double(study.phi_rate.slope) << '\n';
    s << "phi C(H) fit residual: " << format_double(study.phi_rate.residual) << '\n';
  } else if (study.phi_rate.exact) {
    s << "phi C(H) metric: exact (all pairs zero)\n";
  } else {
    s << "phi C(H) slope: not fitted (fewer than 3 pairs)\n";
  }
  if (eps) s << "uniform bound growth max_k Q_k/Q_0: " << format_double(study.uniform_growth) << '\n';
  return s.str();
}

std::vector<std::string> emit_trajectory(const Trajectory& traj, const fs::path& dir) {
  require_levels(traj);
  make_dir(dir);
  write_file(dir, "trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(traj, o); });
  write_file(dir, "steps.ndjson", [&](std::ostream& o) { write_steps_ndjson(traj, o); });
  return {"trajectory.csv", "steps.ndjson"};
}

std::vector<std::string> emit_diagnostics(const Trajectory& traj, const DiagnosticsReport& rep, const fs::path& dir) {
  require_levels(traj);
  make_dir(dir);
  write_file(dir, "diagnostics.csv", [&](std::ostream& o) { write_diagnostics_csv(traj, rep, o); });
  write_file(dir, "diagnostics.ndjson", [&](std::ostream& o) { write_diagnostics_ndjson(traj, rep, o); });
  return {"diagnostics.csv", "diagnostics.ndjson"};
}

std::vector<std::string> emit_study(const CauchyStudy& study, const fs::path& dir) {
  make_dir(dir);
  std::vector<std::string> files{"study.csv", "summary.txt"};
  write_file(dir, "study.csv", [&](std::ostream& o) { write_study_csv(study, o); });
  write_file(dir, "summary.txt", [&](std::ostream& o) { o << study_summary(study); });
  if (!study.uniform.empty()) {
    write_file(dir, "uniform.csv", [&](std::ostream& o) { write_uniform_csv(study, o); });
    files.push_back("uniform.csv");
  }
  return files;
}

void write_manifest(const RunManifest& manifest, const std::vector<std::string>& files, const fs::path& dir) {
  json f = json::object();
  for (const std::string& name : files) f[name] = fnv1a_hex(read_file(dir / name));
  json j = {{"config", manifest.config_path}, {"digest", manifest.digest}, {"command", manifest.command},
            {"out", manifest.out_dir},        {"seed", manifest.seed},     {"files", f}};
  write_file(dir, "manifest.json", [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

}  // namespace nlpf
