#pragma once

#include "nlpf/experiments.hpp"
#include "nlpf/problem.hpp"
#include "nlpf/stepper.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nlpf {

struct StudySettings {
  /// h_list = T / divisor, coarse to fine.
  std::vector<int> h_divisors{16, 32, 64, 128};
  std::vector<double> eps_list{0.1, 0.05, 0.025, 0.0125};
  StepRule rule;
};

/// Fully resolved run configuration.
struct RunConfig {
  ProblemSpec spec;
  int N = 20;
  std::uint64_t seed = 1;
  StepperSettings stepper;
  StudySettings study;
  /// Every section.key with its resolved value; filled by parse_config.
  std::string resolved_text;
};

/// Parses the sectioned key-value format documented in docs/schema.md.
/// Unknown sections or keys, malformed numbers and bad preset names throw
/// ConfigError. The seed argument, when given, overrides [random] seed.
RunConfig parse_config(std::istream& in, const std::uint64_t* seed_override = nullptr);
RunConfig load_config(const std::string& path, const std::uint64_t* seed_override = nullptr);

/// Canonical text of every resolved value, one key per line, floats at 17
/// significant digits. Identical resolved configs give identical text.
std::string canonical_text(const RunConfig& cfg);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace nlpf
