#pragma once

#include "nlpf/diagnostics.hpp"
#include "nlpf/experiments.hpp"
#include "nlpf/stepper.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace nlpf {

/// %.17g: parses back to the same double.
std::string format_double(double v);

/// One trajectory.csv row.
struct TrajectoryRow {
  int n = 0;
  double t = 0.0;
  double theta_H = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double phi_H = 0.0;
  double phi_Linf = 0.0;
  double v_H = 0.0;
  double v_Linf = 0.0;
  double u_H = 0.0;
};

std::vector<TrajectoryRow> trajectory_rows(const Trajectory& traj);

void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in);
void write_steps_ndjson(const Trajectory& traj, std::ostream& out);
void write_diagnostics_csv(const Trajectory& traj, const DiagnosticsReport& rep, std::ostream& out);
void write_diagnostics_ndjson(const Trajectory& traj, const DiagnosticsReport& rep, std::ostream& out);
void write_study_csv(const CauchyStudy& study, std::ostream& out);
void write_uniform_csv(const CauchyStudy& study, std::ostream& out);
std::string study_summary(const CauchyStudy& study);

struct RunManifest {
  std::string config_path;
  std::string digest;
  std::string command;
  std::string out_dir;
  std::uint64_t seed = 0;
};

/// Each emitter creates `dir` if needed, refuses N = 0 trajectories before
/// touching the filesystem, and returns the file names it wrote. I/O
/// failures throw std::runtime_error naming the path.
std::vector<std::string> emit_trajectory(const Trajectory& traj, const std::filesystem::path& dir);
std::vector<std::string> emit_diagnostics(const Trajectory& traj, const DiagnosticsReport& rep,
                                          const std::filesystem::path& dir);
std::vector<std::string> emit_study(const CauchyStudy& study, const std::filesystem::path& dir);

/// manifest.json with the manifest fields and an FNV-1a digest of each file.
void write_manifest(const RunManifest& manifest, const std::vector<std::string>& files,
                    const std::filesystem::path& dir);

}  // namespace nlpf
