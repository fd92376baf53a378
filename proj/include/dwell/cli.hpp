#pragma once

// Run configuration shared by the command line and flat config files
// (key = value lines, # comments). Flags override file values; every run
// echoes its effective config as comment lines ahead of the data so outputs
// are reproducible byte for byte.

#include "dwell/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dwell {

struct RunConfig {
  std::string scenario;  // scoop-box | mutation | zeno-scan | alpha-decay | zurek

  double delta = 1.0;
  double epsilon = 0.0;
  double gamma_thermal = 0.01;
  double gamma_lactose = 0.1;
  std::int64_t n_particles = 1'000'000;

  std::string timing = "poisson";  // or "periodic"
  double rate = 1.0;               // poisson event rate
  double interval = 0.0;           // periodic event spacing
  std::int64_t n_events = 0;
  double t_max = 0.0;

  double dt = 0.0;  // 0 = derived from the stability bounds
  std::uint64_t seed = 42;
  std::string mode = "deterministic";  // or "montecarlo"
  std::string baseline = "count";      // mutation baseline arm: count | frozen

  double tau_min = 1e-3;  // zeno-scan grid
  double tau_max = 4.0;
  int points_per_decade = 100;

  double mass = 0.0;  // zurek inputs, SI
  double temperature = 0.0;
  double displacement = 0.0;
  double relaxation_time = 0.0;

  std::string output;  // file path; empty or "-" = stdout
  int threads = 1;     // montecarlo only; never echoed, results do not depend on it
};

// Scenario-specific defaults layered over the common ones.
RunConfig default_config(const std::string& scenario);

// Key/value pairs from a flat config file; syntax errors throw.
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path);
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

// Typed assignment of one key; unknown keys and bad values throw.
void apply_key_value(RunConfig& config, const std::string& key, const std::string& value);

// Cross-field checks after all sources are merged.
void validate_config(const RunConfig& config);

// Executes the scenario and writes the full output (config echo + CSV).
void run_scenario(const RunConfig& config, std::ostream& out);

// 17-significant-digit serialization used for every floating-point field.
std::string format_g17(double value);

}  // namespace dwell
