#include "dwell/cli.hpp"
#include "dwell/core.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

// Flag keys shared by every scenario subcommand; kebab-case on the command
// line, snake_case in config files and RunConfig.
const std::vector<std::pair<std::string, std::string>> flag_keys = {
    {"delta", "Tunneling matrix element between the wells"},
    {"epsilon", "Energy offset of the target well"},
    {"gamma_thermal", "Background decoherence event rate"},
    {"gamma_lactose", "Decoherence event rate of the capture-coupled arm"},
    {"n_particles", "Ensemble size"},
    {"timing", "Measurement timing: periodic or poisson"},
    {"rate", "Mean event rate for poisson timing"},
    {"interval", "Event spacing for periodic timing"},
    {"n_events", "Number of measurement events"},
    {"t_max", "Total evolution time"},
    {"dt", "Integrator step (0 picks one automatically)"},
    {"seed", "Master seed for all stochastic draws"},
    {"mode", "deterministic or montecarlo"},
    {"baseline", "Reference-arm bookkeeping: count or frozen"},
    {"tau_min", "Smallest measurement spacing in a scan"},
    {"tau_max", "Largest measurement spacing in a scan"},
    {"points_per_decade", "Scan grid resolution"},
    {"mass", "Particle mass in kilograms"},
    {"temperature", "Environment temperature in kelvin"},
    {"displacement", "Separation of the localized configurations in meters"},
    {"relaxation_time", "Energy relaxation time in seconds"},
    {"output", "Write the table here instead of standard output"},
    {"threads", "Worker threads for montecarlo sampling"},
};

std::string kebab(const std::string& key) {
  std::string out = key;
  for (char& ch : out)
    if (ch == '_') ch = '-';
  return out;
}

struct ScenarioArgs {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_common_options(ScenarioArgs& args) {
  args.app->add_option("-c,--config", args.config_path,
                       "Flat key = value config file; flags override it");
  for (const auto& [key, help] : flag_keys) {
    std::string flag = "--" + kebab(key);
    if (key == "output") flag = "-o," + flag;
    args.app->add_option(flag, args.values[key], help)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }
}

int run_main(int argc, char** argv) {
  CLI::App app{"Measurement-driven state selection in a double-well two-level system"};
  app.require_subcommand(0, 1);
  std::string top_config;
  app.add_option("-c,--config", top_config,
                 "Config file naming the scenario (scenario = ...)");

  std::vector<ScenarioArgs> scenarios(5);
  const std::vector<std::pair<std::string, std::string>> names_and_help = {
      {"scoop-box", "Repeated scooping of the near-empty well from a large ensemble"},
      {"mutation", "Two-arm capture kinetics at different decoherence event rates"},
      {"zeno-scan", "Effective transfer rate against measurement spacing"},
      {"alpha-decay", "Reversible (dephasing) versus progressive (absorbing) decay"},
      {"zurek", "Environment-induced decoherence-time estimate"},
  };
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    scenarios[i].app = app.add_subcommand(names_and_help[i].first, names_and_help[i].second);
    add_common_options(scenarios[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const ScenarioArgs* chosen = nullptr;
  for (const ScenarioArgs& s : scenarios)
    if (s.app->parsed()) chosen = &s;

  const std::string config_path =
      chosen && !chosen->config_path.empty() ? chosen->config_path : top_config;
  std::vector<std::pair<std::string, std::string>> file_pairs;
  if (!config_path.empty()) file_pairs = dwell::parse_config_file(config_path);

  std::string scenario = chosen ? chosen->app->get_name() : "";
  if (scenario.empty()) {
    for (const auto& [key, value] : file_pairs)
      if (key == "scenario") scenario = value;
    if (scenario.empty())
      throw dwell::ValidationError(
          "config: name a scenario subcommand or set scenario = ... in the config file");
  }

  dwell::RunConfig config = dwell::default_config(scenario);
  for (const auto& [key, value] : file_pairs) dwell::apply_key_value(config, key, value);
  config.scenario = scenario;
  if (chosen)
    for (const auto& [key, help] : flag_keys)
      if (chosen->app->count("--" + kebab(key)) > 0)
        dwell::apply_key_value(config, key, chosen->values.at(key));
  dwell::validate_config(config);

  if (config.output.empty() || config.output == "-") {
    dwell::run_scenario(config, std::cout);
    return 0;
  }
  std::ofstream file(config.output, std::ios::binary);
  if (!file)
    throw dwell::ValidationError("config: cannot open output file: " + config.output);
  dwell::run_scenario(config, file);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const dwell::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dwell::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
