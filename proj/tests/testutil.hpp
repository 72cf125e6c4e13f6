#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "segloss/field.hpp"

namespace testutil {

// [0, 1) from the raw engine so generated fields are identical across
// standard library implementations.
inline double unit_uniform(std::mt19937& rng) {
  return static_cast<double>(rng()) / 4294967296.0;
}

inline segloss::ProbField random_prob(std::mt19937& rng, int h, int w,
                                      double lo = 0.0, double hi = 1.0) {
  std::vector<double> values(static_cast<std::size_t>(h) * w);
  for (double& v : values) v = lo + (hi - lo) * unit_uniform(rng);
  return segloss::make_prob_field(h, w, std::move(values));
}

inline segloss::MaskField random_mask(std::mt19937& rng, int h, int w,
                                      bool force_mixed = true) {
  std::vector<std::uint8_t> values(static_cast<std::size_t>(h) * w);
  for (auto& v : values) v = static_cast<std::uint8_t>(rng() & 1u);
  if (force_mixed && values.size() > 1) {
    values.front() = 1;
    values.back() = 0;
  }
  return segloss::make_mask_field(h, w, std::move(values));
}

inline std::filesystem::path test_scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("segloss_tests_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

inline std::string cli_path() {
  if (const char* path = std::getenv("SEGLOSS_CLI"); path != nullptr) {
    return path;
  }
  for (const char* candidate :
       {"./segloss", "./build/segloss", "../segloss", "../../segloss"}) {
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return "segloss";
}

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

inline CliResult run_cli(const std::string& args) {
  const std::string command = cli_path() + " " + args + " 2>/dev/null";
  CliResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buffer;
  std::size_t got = 0;
  while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace testutil
