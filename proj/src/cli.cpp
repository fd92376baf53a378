#include "dwell/cli.hpp"

#include "dwell/measurement.hpp"
#include "dwell/scenarios.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dwell {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ValidationError("config: key '" + key + "': not a number: " + value);
  }
  if (used != value.size())
    throw ValidationError("config: key '" + key + "': trailing characters: " + value);
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    throw ValidationError("config: key '" + key + "': not an integer: " + value);
  }
  if (used != value.size())
    throw ValidationError("config: key '" + key + "': trailing characters: " + value);
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    throw ValidationError("config: key '" + key + "': not an unsigned integer: " + value);
  }
  if (used != value.size())
    throw ValidationError("config: key '" + key + "': trailing characters: " + value);
  return v;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"scoop-box", "mutation", "zeno-scan",
                                              "alpha-decay", "zurek"};
  return names;
}

bool known_scenario(const std::string& name) {
  for (const std::string& s : scenario_names())
    if (s == name) return true;
  return false;
}

MeasurementProtocol protocol_from(const RunConfig& config, ProtocolMode mode) {
  MeasurementProtocol protocol;
  protocol.timing = config.timing == "periodic" ? TimingKind::periodic : TimingKind::poisson;
  protocol.interval = config.interval;
  protocol.rate = config.rate;
  protocol.n_events = config.n_events;
  protocol.t_max = config.t_max;
  protocol.mode = mode;
  return protocol;
}

void write_config_echo(const RunConfig& c, std::ostream& out) {
  out << "# scenario = " << c.scenario << "\n";
  out << "# delta = " << format_g17(c.delta) << "\n";
  out << "# epsilon = " << format_g17(c.epsilon) << "\n";
  out << "# gamma_thermal = " << format_g17(c.gamma_thermal) << "\n";
  out << "# gamma_lactose = " << format_g17(c.gamma_lactose) << "\n";
  out << "# n_particles = " << c.n_particles << "\n";
  out << "# timing = " << c.timing << "\n";
  out << "# rate = " << format_g17(c.rate) << "\n";
  out << "# interval = " << format_g17(c.interval) << "\n";
  out << "# n_events = " << c.n_events << "\n";
  out << "# t_max = " << format_g17(c.t_max) << "\n";
  out << "# dt = " << format_g17(c.dt) << "\n";
  out << "# seed = " << c.seed << "\n";
  out << "# mode = " << c.mode << "\n";
  out << "# baseline = " << c.baseline << "\n";
  out << "# tau_min = " << format_g17(c.tau_min) << "\n";
  out << "# tau_max = " << format_g17(c.tau_max) << "\n";
  out << "# points_per_decade = " << c.points_per_decade << "\n";
  out << "# mass = " << format_g17(c.mass) << "\n";
  out << "# temperature = " << format_g17(c.temperature) << "\n";
  out << "# displacement = " << format_g17(c.displacement) << "\n";
  out << "# relaxation_time = " << format_g17(c.relaxation_time) << "\n";
}

void write_trace_rows(const KineticsTrace& trace, std::ostream& out) {
  for (const TraceSample& s : trace.samples) {
    out << format_g17(s.time) << ',' << format_g17(s.pop_x) << ','
        << format_g17(s.pop_y) << ',' << format_g17(s.captured_fraction) << ','
        << format_g17(s.scoop_count) << "\n";
  }
}

constexpr const char* trace_header = "time,pop_x,pop_y,captured_fraction,scoop_count";

void run_scoop_box(const RunConfig& config, std::ostream& out) {
  const MeasurementProtocol protocol = protocol_from(config, ProtocolMode::scoop);
  const bool monte_carlo = config.mode == "montecarlo";
  const KineticsTrace trace =
      scoop_box_experiment(config.n_particles, config.delta, config.epsilon, protocol,
                           config.seed, monte_carlo, config.threads);
  out << trace_header << "\n";
  write_trace_rows(trace, out);
}

void run_mutation(const RunConfig& config, std::ostream& out) {
  const WellSystem system{config.delta, config.epsilon, false};
  MutationOptions options;
  options.t_max = config.t_max;
  options.n_particles = config.n_particles;
  options.seed = config.seed;
  options.baseline = config.baseline == "frozen" ? BaselineBookkeeping::frozen
                                                 : BaselineBookkeeping::count_mutants;
  const AdaptiveMutationRun run =
      adaptive_mutation_full(system, config.gamma_thermal, config.gamma_lactose, options);
  out << trace_header << "\n";
  out << "# arm = minus\n";
  write_trace_rows(run.minus_trace, out);
  out << "# arm = plus\n";
  write_trace_rows(run.plus_trace, out);
  out << "# rate_minus=" << format_g17(run.result.rate_minus)
      << ", rate_plus=" << format_g17(run.result.rate_plus)
      << ", enhancement=" << format_g17(run.result.enhancement) << "\n";
}

void run_zeno_scan(const RunConfig& config, std::ostream& out) {
  const WellSystem system{config.delta, config.epsilon, false};
  const std::vector<double> taus =
      log_spaced_taus(config.tau_min, config.tau_max, config.points_per_decade);
  const std::vector<ZenoPoint> points = zeno_scan(system, taus);
  out << "tau,effective_rate\n";
  for (const ZenoPoint& p : points)
    out << format_g17(p.tau) << ',' << format_g17(p.effective_rate) << "\n";
}

void run_alpha_decay(const RunConfig& config, std::ostream& out) {
  const WellSystem system{config.delta, config.epsilon, false};
  const AlphaDecayComparison comparison =
      alpha_decay_compare(system, config.gamma_thermal, config.t_max, config.dt);
  out << trace_header << "\n";
  out << "# arm = reversible\n";
  write_trace_rows(comparison.reversible, out);
  out << "# arm = absorbing\n";
  write_trace_rows(comparison.absorbing, out);
}

void run_zurek(const RunConfig& config, std::ostream& out) {
  const ZurekInputs inputs{config.mass, config.temperature, config.displacement,
                           config.relaxation_time};
  out << "tau_d_seconds\n";
  out << format_g17(zurek_decoherence_time(inputs)) << "\n";
}

}  // namespace

std::string format_g17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

RunConfig default_config(const std::string& scenario) {
  if (!known_scenario(scenario))
    throw ValidationError("config: unknown scenario: " + scenario);
  RunConfig config;
  config.scenario = scenario;
  if (scenario == "scoop-box") {
    config.epsilon = 223.6;
    config.n_events = 100;
  } else if (scenario == "mutation") {
    config.epsilon = 223.6;
    config.t_max = 1e5;
  } else if (scenario == "alpha-decay") {
    config.gamma_thermal = 10.0;
    config.t_max = 60.0;
  }
  return config;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config: line " + std::to_string(line_no) +
                            ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ValidationError("config: line " + std::to_string(line_no) +
                            ": empty key or value");
    pairs.emplace_back(key, value);
  }
  return pairs;
}

std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file)
    throw ValidationError("config: cannot open file: " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_key_value(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "scenario") {
    if (!known_scenario(value))
      throw ValidationError("config: unknown scenario: " + value);
    c.scenario = value;
  } else if (key == "delta") {
    c.delta = parse_double(key, value);
  } else if (key == "epsilon") {
    c.epsilon = parse_double(key, value);
  } else if (key == "gamma_thermal") {
    c.gamma_thermal = parse_double(key, value);
  } else if (key == "gamma_lactose") {
    c.gamma_lactose = parse_double(key, value);
  } else if (key == "n_particles") {
    c.n_particles = parse_int(key, value);
  } else if (key == "timing") {
    if (value != "periodic" && value != "poisson")
      throw ValidationError("config: key 'timing': must be periodic or poisson");
    c.timing = value;
  } else if (key == "rate") {
    c.rate = parse_double(key, value);
  } else if (key == "interval") {
    c.interval = parse_double(key, value);
  } else if (key == "n_events") {
    c.n_events = parse_int(key, value);
  } else if (key == "t_max") {
    c.t_max = parse_double(key, value);
  } else if (key == "dt") {
    c.dt = parse_double(key, value);
  } else if (key == "seed") {
    c.seed = parse_uint(key, value);
  } else if (key == "mode") {
    if (value != "deterministic" && value != "montecarlo")
      throw ValidationError("config: key 'mode': must be deterministic or montecarlo");
    c.mode = value;
  } else if (key == "baseline") {
    if (value != "count" && value != "frozen")
      throw ValidationError("config: key 'baseline': must be count or frozen");
    c.baseline = value;
  } else if (key == "tau_min") {
    c.tau_min = parse_double(key, value);
  } else if (key == "tau_max") {
    c.tau_max = parse_double(key, value);
  } else if (key == "points_per_decade") {
    c.points_per_decade = static_cast<int>(parse_int(key, value));
  } else if (key == "mass") {
    c.mass = parse_double(key, value);
  } else if (key == "temperature") {
    c.temperature = parse_double(key, value);
  } else if (key == "displacement") {
    c.displacement = parse_double(key, value);
  } else if (key == "relaxation_time") {
    c.relaxation_time = parse_double(key, value);
  } else if (key == "output") {
    c.output = value;
  } else if (key == "threads") {
    c.threads = static_cast<int>(parse_int(key, value));
  } else {
    throw ValidationError("config: unknown key: " + key);
  }
}

void validate_config(const RunConfig& c) {
  if (!known_scenario(c.scenario))
    throw ValidationError("config: unknown scenario: " + c.scenario);
  WellSystem system{c.delta, c.epsilon, false};
  system.validate();
  if (c.mode != "deterministic" && c.mode != "montecarlo")
    throw ValidationError("config: key 'mode': must be deterministic or montecarlo");
  if (c.timing != "periodic" && c.timing != "poisson")
    throw ValidationError("config: key 'timing': must be periodic or poisson");
  if (c.threads < 1)
    throw ValidationError("config: thread count must be at least 1");

  if (c.scenario == "scoop-box") {
    if (c.n_particles < 1)
      throw ValidationError("config: key 'n_particles': must be at least 1");
    protocol_from(c, ProtocolMode::scoop).validate();
  } else if (c.scenario == "mutation") {
    if (c.n_particles < 1)
      throw ValidationError("config: key 'n_particles': must be at least 1");
    if (!(c.gamma_thermal > 0.0) || !(c.gamma_lactose > 0.0))
      throw ValidationError("config: mutation needs positive gamma_thermal and gamma_lactose");
    if (!(c.t_max > 0.0))
      throw ValidationError("config: mutation needs a positive t_max");
  } else if (c.scenario == "zeno-scan") {
    if (!(c.tau_min > 0.0) || !(c.tau_max > c.tau_min))
      throw ValidationError("config: zeno-scan needs 0 < tau_min < tau_max");
    if (c.points_per_decade < 1)
      throw ValidationError("config: key 'points_per_decade': must be at least 1");
  } else if (c.scenario == "alpha-decay") {
    if (!(c.gamma_thermal > 0.0))
      throw ValidationError("config: alpha-decay needs a positive gamma_thermal");
    if (!(c.t_max > 0.0))
      throw ValidationError("config: alpha-decay needs a positive t_max");
    if (c.dt < 0.0)
      throw ValidationError("config: key 'dt': must be nonnegative");
  } else if (c.scenario == "zurek") {
    ZurekInputs{c.mass, c.temperature, c.displacement, c.relaxation_time}.validate();
  }
}

void run_scenario(const RunConfig& config, std::ostream& out) {
  validate_config(config);
  write_config_echo(config, out);
  if (config.scenario == "scoop-box") {
    run_scoop_box(config, out);
  } else if (config.scenario == "mutation") {
    run_mutation(config, out);
  } else if (config.scenario == "zeno-scan") {
    run_zeno_scan(config, out);
  } else if (config.scenario == "alpha-decay") {
    run_alpha_decay(config, out);
  } else {
    run_zurek(config, out);
  }
}

}  // namespace dwell
