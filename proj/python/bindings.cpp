#include "nlpf/config.hpp"
#include "nlpf/diagnostics.hpp"
#include "nlpf/elliptic.hpp"
#include "nlpf/errors.hpp"
#include "nlpf/experiments.hpp"
#include "nlpf/interpolants.hpp"
#include "nlpf/io.hpp"
#include "nlpf/stepper.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace nlpf;

namespace {

RunConfig config_from_text(const std::string& text, std::optional<std::uint64_t> seed) {
  std::istringstream in(text);
  return parse_config(in, seed ? &*seed : nullptr);
}

RunConfig config_from_file(const std::string& path, std::optional<std::uint64_t> seed) {
  return load_config(path, seed ? &*seed : nullptr);
}

std::shared_ptr<const ProblemData> problem(const RunConfig& cfg) { return std::make_shared<const ProblemData>(cfg.spec); }

/// Levels stacked as rows.
Eigen::MatrixXd stack(const Trajectory& traj, GridFunction StepState::*field) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(traj.states.size()), static_cast<Eigen::Index>(traj.grid().size()));
  for (std::size_t n = 0; n < traj.states.size(); ++n) out.row(static_cast<Eigen::Index>(n)) = traj.states[n].*field;
  return out;
}

py::dict report_dict(const StepReport& r) {
  py::dict d;
  d["n"] = r.n;
  d["fixed_point_iters"] = r.fixed_point_iters;
  d["contraction_ratio"] = r.contraction_ratio_measured;
  d["kappa"] = r.kappa_theory;
  d["newton_iters"] = r.newton_iters;
  d["defect_heat"] = r.defect_eq1_vstar;
  d["defect_phase"] = r.defect_eq2_H;
  d["min_theta"] = r.min_theta;
  return d;
}

py::dict study_dict(const CauchyStudy& st) {
  py::list rows;
  for (const StudyRow& r : st.rows) {
    py::dict d;
    d["a"] = r.a;
    d["b"] = r.b;
    d["h_a"] = r.h_a;
    d["h_b"] = r.h_b;
    d["phi_hat_CH"] = r.metrics.phi_hat_CH;
    d["v_hat_CH"] = r.metrics.v_hat_CH;
    d["v_bar_L2H"] = r.metrics.v_bar_L2H;
    d["v_hat_L2Vstar"] = r.metrics.v_hat_L2Vstar;
    d["lhs"] = r.lhs;
    d["shape"] = r.shape;
    d["bound"] = r.bound;
    d["holds"] = r.holds;
    rows.append(d);
  }
  py::list uniform;
  for (const UniformQuantities& q : st.uniform) {
    py::dict d;
    d["eps"] = q.eps;
    d["sqrt_eps_theta_LinfH"] = q.sqrt_eps_theta_LinfH;
    d["theta_L2V"] = q.theta_L2V;
    d["log_theta_LinfH"] = q.log_theta_LinfH;
    d["phi_W22"] = q.phi_W22;
    d["phi_W1inf"] = q.phi_W1inf;
    uniform.append(d);
  }
  py::dict out;
  out["kind"] = st.kind;
  out["rows"] = rows;
  out["fitted_C"] = st.fitted_C;
  out["inequality_holds"] = st.inequality_holds;
  out["slope"] = st.slope_fitted ? py::cast(st.phi_rate.slope) : py::none();
  out["uniform"] = uniform;
  out["uniform_growth"] = st.uniform_growth;
  return out;
}

}  // namespace

PYBIND11_MODULE(_nlpf, m) {
  m.doc() = "Implicit time stepping for a singular nonlocal phase-field system with inertia";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<StepFailure>(m, "StepFailure", PyExc_RuntimeError);
  py::register_exception<NoConvergence>(m, "NoConvergence", PyExc_RuntimeError);

  m.def("yosida_ln", py::vectorize(yosida_ln), py::arg("x"), py::arg("tau"));
  m.def("kappa", &kappa, py::arg("eps"), py::arg("h"), py::arg("ell"), py::arg("pi_lip"));
  m.def("max_step", &max_step, py::arg("eps"), py::arg("ell"), py::arg("pi_lip"), py::arg("safety"));

  py::class_<RunConfig>(m, "Config")
      .def_static("load", &config_from_file, py::arg("path"), py::arg("seed") = std::nullopt)
      .def_static("parse", &config_from_text, py::arg("text"), py::arg("seed") = std::nullopt)
      .def_readwrite("N", &RunConfig::N)
      .def_readonly("seed", &RunConfig::seed)
      .def_property(
          "epsilon", [](const RunConfig& c) { return c.spec.epsilon; }, [](RunConfig& c, double v) { c.spec.epsilon = v; })
      .def_property(
          "T", [](const RunConfig& c) { return c.spec.T; }, [](RunConfig& c, double v) { c.spec.T = v; })
      .def_property_readonly("ell", [](const RunConfig& c) { return c.spec.ell; })
      .def_property_readonly("eta", [](const RunConfig& c) { return c.spec.eta; })
      .def_property_readonly("nodes", [](const RunConfig& c) { return c.spec.grid.size(); })
      .def_property_readonly("coords",
                             [](const RunConfig& c) {
                               Eigen::MatrixXd x(static_cast<Eigen::Index>(c.spec.grid.size()), c.spec.grid.dim());
                               for (std::size_t i = 0; i < c.spec.grid.size(); ++i)
                                 for (int d = 0; d < c.spec.grid.dim(); ++d)
                                   x(static_cast<Eigen::Index>(i), d) = c.spec.grid.coords(i)[static_cast<std::size_t>(d)];
                               return x;
                             })
      .def_property_readonly("theta0", [](const RunConfig& c) { return c.spec.theta0; })
      .def_property_readonly("phi0", [](const RunConfig& c) { return c.spec.phi0; })
      .def_property_readonly("v0", [](const RunConfig& c) { return c.spec.v0; })
      .def_property_readonly("digest", [](const RunConfig& c) { return fnv1a_hex(canonical_text(c)); })
      .def("validate", [](const RunConfig& c) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const Violation& v : validate(ProblemData(c.spec))) out.emplace_back(v.code, v.message);
        return out;
      });

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("h", &Trajectory::h)
      .def_readonly("N", &Trajectory::N)
      .def_property_readonly("t",
                             [](const Trajectory& t) {
                               Eigen::VectorXd out(t.N + 1);
                               for (int n = 0; n <= t.N; ++n) out[n] = n * t.h;
                               return out;
                             })
      .def_property_readonly("theta", [](const Trajectory& t) { return stack(t, &StepState::theta); })
      .def_property_readonly("phi", [](const Trajectory& t) { return stack(t, &StepState::phi); })
      .def_property_readonly("v", [](const Trajectory& t) { return stack(t, &StepState::v); })
      .def_property_readonly("u", [](const Trajectory& t) { return stack(t, &StepState::u); })
      .def_property_readonly("reports",
                             [](const Trajectory& t) {
                               py::list out;
                               for (const StepReport& r : t.reports) out.append(report_dict(r));
                               return out;
                             })
      .def("identity_defects", &verify_identities)
      .def("diagnose",
           [](const Trajectory& t) {
             const DiagnosticsReport rep = diagnose(t);
             py::dict d;
             std::vector<double> lhs, split, gronwall, defect;
             for (const EnergyRow& r : rep.energy) {
               lhs.push_back(r.lhs);
               split.push_back(r.rhs_split);
               gronwall.push_back(r.rhs_gronwall);
             }
             for (const CumulativeRow& r : rep.cumulative) defect.push_back(r.identity_defect);
             d["energy_lhs"] = lhs;
             d["energy_rhs_split"] = split;
             d["energy_rhs_gronwall"] = gronwall;
             d["identity_defect"] = defect;
             d["entropy_defects"] = rep.entropy_defects;
             d["phi_Linf_max"] = rep.linf.phi_max;
             d["v_Linf_max"] = rep.linf.v_max;
             d["min_theta"] = rep.min_theta;
             return d;
           })
      .def(
          "write",
          [](const Trajectory& t, const std::filesystem::path& dir, bool diagnostics) {
            std::vector<std::string> files = emit_trajectory(t, dir);
            if (diagnostics) {
              const auto more = emit_diagnostics(t, diagnose(t), dir);
              files.insert(files.end(), more.begin(), more.end());
            }
            return files;
          },
          py::arg("out_dir"), py::arg("diagnostics") = false);

  m.def(
      "run",
      [](const RunConfig& cfg, std::optional<int> N) {
        auto pd = problem(cfg);
        py::gil_scoped_release release;
        return run(pd, N.value_or(cfg.N), cfg.stepper);
      },
      py::arg("config"), py::arg("N") = std::nullopt);

  m.def(
      "cauchy_h",
      [](const RunConfig& cfg, std::optional<std::vector<int>> divisors) {
        std::vector<double> hs;
        for (int d : divisors.value_or(cfg.study.h_divisors)) hs.push_back(cfg.spec.T / d);
        CauchyStudy st;
        {
          py::gil_scoped_release release;
          st = cauchy_in_h(problem(cfg), hs, cfg.stepper);
        }
        return study_dict(st);
      },
      py::arg("config"), py::arg("divisors") = std::nullopt);

  m.def(
      "cauchy_eps",
      [](const RunConfig& cfg, std::optional<std::vector<double>> eps_list) {
        CauchyStudy st;
        {
          py::gil_scoped_release release;
          st = cauchy_in_eps(problem(cfg), eps_list.value_or(cfg.study.eps_list), cfg.study.rule, cfg.stepper);
        }
        return study_dict(st);
      },
      py::arg("config"), py::arg("eps_list") = std::nullopt);
}
