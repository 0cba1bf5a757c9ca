#include "fixtures.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(NLPF_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) r.out += buf;
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("nlpf_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

/// Keys left out fall back to the built-in defaults.
std::string write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "cfg.ini";
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("validate on the shipped config") {
  const Result r = cli("--config " + fixtures::source_path("configs/default.ini") + " --command validate");
  CHECK(r.code == 0);
  CHECK(r.out.find("0 violations") != std::string::npos);
}

TEST_CASE("validate reports a zero theta0 floor") {
  const auto dir = scratch("floor");
  const std::string cfg = write_config(dir, "[theta0]\ntype = cosine\nbase = 0.5\namplitude = 0.5\n");
  const Result r = cli("--config " + cfg + " --command validate");
  CHECK(r.code == 2);
  CHECK(r.out.find("theta0") != std::string::npos);
  CHECK(r.out.find("1 violations") != std::string::npos);
}

TEST_CASE("unknown keys are a validation failure") {
  const auto dir = scratch("unknown");
  const Result r = cli("--config " + write_config(dir, "[solver]\nfp_tol = 1\n") + " --command validate");
  CHECK(r.code == 2);
  CHECK(r.out.find("fp_tol") != std::string::npos);
}

TEST_CASE("run on 16 nodes with N = 20 writes 21 data rows") {
  const auto dir = scratch("run16");
  const std::string cfg = write_config(dir, "[grid]\nnodes = 16\n[model]\nN = 20\n");
  const Result r = cli("--config " + cfg + " --command run --out " + (dir / "out").string());
  REQUIRE(r.code == 0);
  std::ifstream csv(dir / "out" / "trajectory.csv");
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 21);
  CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("fixed-point failure exits with 3 and names the step") {
  const auto dir = scratch("noconv");
  const std::string cfg = write_config(dir, "[solver]\nfp_max_iter = 1\n");
  const Result r = cli("--config " + cfg + " --command run --out " + (dir / "out").string());
  CHECK(r.code == 3);
  CHECK(r.out.find("step 1") != std::string::npos);
}

TEST_CASE("a step above max_step is a validation failure") {
  const auto dir = scratch("bigstep");
  const std::string cfg = write_config(dir, "[model]\nepsilon = 0.001\nN = 2\n");
  const Result r = cli("--config " + cfg + " --command run --out " + (dir / "out").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("step_size") != std::string::npos);
}

TEST_CASE("repeated diagnose runs are byte identical") {
  const auto dir = scratch("det");
  const std::string cfg = fixtures::source_path("configs/default.ini");
  for (const char* sub : {"a", "b"}) {
    const Result r = cli("--config " + cfg + " --command diagnose --seed 9 --out " + (dir / sub).string());
    REQUIRE(r.code == 0);
  }
  for (const char* f : {"trajectory.csv", "steps.ndjson", "diagnostics.csv", "diagnostics.ndjson"})
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
}

TEST_CASE("levels override shortens a study") {
  const auto dir = scratch("levels");
  const Result r = cli("--config " + fixtures::source_path("configs/default.ini") +
                       " --command cauchy-h --levels 3 --out " + (dir / "o").string());
  REQUIRE(r.code == 0);
  std::ifstream csv(dir / "o" / "study.csv");
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 2);
}
