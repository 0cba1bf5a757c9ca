#include "nlpf/config.hpp"
#include "nlpf/diagnostics.hpp"
#include "nlpf/errors.hpp"
#include "nlpf/experiments.hpp"
#include "nlpf/io.hpp"
#include "nlpf/problem.hpp"
#include "nlpf/stepper.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInvalid = 2;
constexpr int kNoConvergence = 3;

std::vector<nlpf::Violation> check(const nlpf::RunConfig& cfg, const nlpf::ProblemData& pd, const std::string& command) {
  std::vector<nlpf::Violation> out = nlpf::validate(pd);
  if (command == "run" || command == "diagnose" || command == "validate") {
    const double h = cfg.spec.T / cfg.N;
    const double hmax = nlpf::max_step(cfg.spec.epsilon, cfg.spec.ell, cfg.spec.nonlin.pi_lip, cfg.stepper.kappa_safety);
    if (h > hmax * (1.0 + 1e-12))
      out.push_back({"step_size", "T/N = " + nlpf::format_double(h) + " exceeds max_step " + nlpf::format_double(hmax)});
  }
  return out;
}

std::vector<int> divisors_for(const std::vector<int>& base, std::optional<int> levels) {
  std::vector<int> d = base;
  if (!levels) return d;
  if (*levels < 1) throw nlpf::ConfigError("--levels must be positive");
  while (static_cast<int>(d.size()) < *levels) d.push_back(d.back() * 2);
  d.resize(static_cast<std::size_t>(*levels));
  return d;
}

std::vector<double> eps_for(const std::vector<double>& base, std::optional<int> levels) {
  std::vector<double> e = base;
  if (!levels) return e;
  if (*levels < 1) throw nlpf::ConfigError("--levels must be positive");
  while (static_cast<int>(e.size()) < *levels) e.push_back(e.back() / 2.0);
  e.resize(static_cast<std::size_t>(*levels));
  return e;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit time stepping for the nonlocal phase-field system with inertia"};
  std::string config_path;
  std::string out_dir;
  std::string command = "run";
  std::optional<std::uint64_t> seed;
  std::optional<int> levels;
  app.add_option("--config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--command", command, "What to do")
      ->check(CLI::IsMember({"validate", "run", "diagnose", "cauchy-h", "cauchy-eps"}));
  app.add_option("--seed", seed, "Seed for randomized initial data");
  app.add_option("--levels", levels, "Number of study levels");
  CLI11_PARSE(app, argc, argv);

  if (command != "validate" && out_dir.empty()) {
    std::cerr << "error: --out is required for " << command << '\n';
    return kError;
  }

  try {
    const nlpf::RunConfig cfg = nlpf::load_config(config_path, seed ? &*seed : nullptr);
    auto pd = std::make_shared<const nlpf::ProblemData>(cfg.spec);
    const auto violations = check(cfg, *pd, command);
    for (const auto& v : violations) std::cout << v.code << ": " << v.message << '\n';
    if (command == "validate" || !violations.empty()) {
      for (const auto& w : nlpf::step_warnings(*pd, cfg.spec.T / cfg.N)) std::cerr << "warning: " << w << '\n';
      std::cout << violations.size() << " violations\n";
      return violations.empty() ? kOk : kInvalid;
    }

    nlpf::RunManifest manifest{config_path, nlpf::fnv1a_hex(nlpf::canonical_text(cfg)), command, out_dir, cfg.seed};
    std::vector<std::string> files;
    if (command == "run" || command == "diagnose") {
      const nlpf::Trajectory traj = nlpf::run(pd, cfg.N, cfg.stepper);
      files = nlpf::emit_trajectory(traj, out_dir);
      if (command == "diagnose") {
        const auto more = nlpf::emit_diagnostics(traj, nlpf::diagnose(traj), out_dir);
        files.insert(files.end(), more.begin(), more.end());
      }
    } else {
      nlpf::CauchyStudy study;
      if (command == "cauchy-h") {
        std::vector<double> h_list;
        for (int d : divisors_for(cfg.study.h_divisors, levels)) h_list.push_back(cfg.spec.T / d);
        study = nlpf::cauchy_in_h(pd, h_list, cfg.stepper);
      } else {
        study = nlpf::cauchy_in_eps(pd, eps_for(cfg.study.eps_list, levels), cfg.study.rule, cfg.stepper);
      }
      files = nlpf::emit_study(study, out_dir);
      std::cout << nlpf::study_summary(study);
    }
    nlpf::write_manifest(manifest, files, out_dir);
    std::cout << "wrote " << files.size() + 1 << " files to " << out_dir << '\n';
    return kOk;
  } catch (const nlpf::ConfigError& e) {
    std::cout << "config: " << e.what() << '\n' << "1 violations\n";
    return kInvalid;
  } catch (const nlpf::StepFailure& e) {
    std::cerr << "step failure at step " << e.step() << ": " << e.what() << '\n';
    return e.is_convergence_failure() ? kNoConvergence : kError;
  } catch (const nlpf::NoConvergence& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}
