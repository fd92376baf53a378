#pragma once

// Shared helpers for the test binaries: random density matrices, tiny file
// utilities, and a subprocess runner for exercising the command-line tool.

#include "dwell/core.hpp"
#include "dwell/rng.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>

namespace testing {

// rho = A A^+ / tr(A A^+) for a pseudo-random complex A: always a valid state.
inline dwell::DensityMatrix random_density(int dim, std::uint64_t seed) {
  dwell::ComplexMatrix a(dim, dim);
  std::uint64_t k = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double re = dwell::rng::uniform(seed, 7, k++, 0) - 0.5;
      const double im = dwell::rng::uniform(seed, 7, k++, 0) - 0.5;
      a(i, j) = dwell::Complex(re, im);
    }
  dwell::DensityMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return rho;
}

inline std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

// Runs a shell command, capturing stdout; append "2>&1" to also see stderr.
inline CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed: " + command);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    result.output.append(buf, got);
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

inline std::string cli_path() { return DWELL_CLI_PATH; }

}  // namespace testing
