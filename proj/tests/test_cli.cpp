// Config handling and the command-line front end. Subprocess cases exercise
// the installed binary end to end: precedence, echo, exit codes, and
// byte-level reproducibility.

#include "dwell/cli.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

using namespace dwell;

namespace {

std::string quoted_cli() { return "\"" + testing::cli_path() + "\""; }

int count_char(const std::string& s, char c) {
  int n = 0;
  for (const char ch : s) n += ch == c ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("per-scenario defaults") {
  const RunConfig scoop = default_config("scoop-box");
  CHECK(scoop.epsilon == 223.6);
  CHECK(scoop.n_events == 100);
  CHECK(scoop.n_particles == 1000000);
  CHECK(scoop.timing == "poisson");

  const RunConfig mutation = default_config("mutation");
  CHECK(mutation.t_max == 1e5);
  CHECK(mutation.gamma_thermal == 0.01);
  CHECK(mutation.gamma_lactose == 0.1);

  const RunConfig alpha = default_config("alpha-decay");
  CHECK(alpha.gamma_thermal == 10.0);
  CHECK(alpha.t_max == 60.0);

  const RunConfig zeno = default_config("zeno-scan");
  CHECK(zeno.tau_min == 1e-3);
  CHECK(zeno.tau_max == 4.0);
  CHECK(zeno.points_per_decade == 100);

  CHECK_THROWS_AS(default_config("bogus"), ValidationError);
}

TEST_CASE("config text parser") {
  const std::string text =
      "# comment line\n"
      "\n"
      "delta = 2.5\n"
      "timing = periodic   # trailing comment\n"
      "  seed=9  \n";
  const auto pairs = parse_config_text(text);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].first == "delta");
  CHECK(pairs[0].second == "2.5");
  CHECK(pairs[1].second == "periodic");
  CHECK(pairs[2].first == "seed");
  CHECK(pairs[2].second == "9");

  CHECK_THROWS_WITH_AS(parse_config_text("delta 2.5\n"),
                       "config: line 1: expected key = value", ValidationError);
  CHECK_THROWS_WITH_AS(parse_config_text("ok = 1\ndelta =\n"),
                       "config: line 2: empty key or value", ValidationError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/path.cfg"), ValidationError);
}

TEST_CASE("key application and validation errors") {
  RunConfig config = default_config("scoop-box");
  apply_key_value(config, "delta", "2.5");
  CHECK(config.delta == 2.5);
  apply_key_value(config, "n_events", "7");
  CHECK(config.n_events == 7);
  apply_key_value(config, "mode", "montecarlo");
  CHECK(config.mode == "montecarlo");

  CHECK_THROWS_AS(apply_key_value(config, "bogus", "1"), ValidationError);
  CHECK_THROWS_AS(apply_key_value(config, "delta", "abc"), ValidationError);
  CHECK_THROWS_AS(apply_key_value(config, "delta", "1.5x"), ValidationError);
  CHECK_THROWS_AS(apply_key_value(config, "seed", "-4"), ValidationError);
  CHECK_THROWS_AS(apply_key_value(config, "mode", "sometimes"), ValidationError);
  CHECK_THROWS_AS(apply_key_value(config, "timing", "random"), ValidationError);
  CHECK_THROWS_AS(apply_key_value(config, "scenario", "bogus"), ValidationError);

  config.delta = -1.0;
  CHECK_THROWS_AS(validate_config(config), ValidationError);
  config = default_config("scoop-box");
  config.n_events = 0;
  config.t_max = 0.0;
  CHECK_THROWS_AS(validate_config(config), ValidationError);
  config = default_config("mutation");
  config.gamma_lactose = 0.0;
  CHECK_THROWS_AS(validate_config(config), ValidationError);
  config = default_config("zurek");  // inputs default to zero
  CHECK_THROWS_AS(validate_config(config), ValidationError);
  config = default_config("zeno-scan");
  config.tau_max = config.tau_min;
  CHECK_THROWS_AS(validate_config(config), ValidationError);
}

TEST_CASE("seventeen-digit round-trip formatting") {
  CHECK(format_g17(1.0) == "1");
  CHECK(format_g17(0.25) == "0.25");
  CHECK(format_g17(0.1) == "0.10000000000000001");
  CHECK(format_g17(223.6) == "223.59999999999999");
  CHECK(format_g17(1e-10) == "1e-10");
  CHECK(format_g17(0.077675714533724294) == "0.077675714533724294");
}

TEST_CASE("scenario output: config echo then data") {
  RunConfig config = default_config("zurek");
  config.mass = 1.6726e-27;
  config.temperature = 310.0;
  config.displacement = 1e-10;
  config.relaxation_time = 1.0;

  std::ostringstream out;
  run_scenario(config, out);
  const std::string text = out.str();

  CHECK(text.find("# scenario = zurek\n") != std::string::npos);
  CHECK(text.find("# mass = 1.6726e-27\n") != std::string::npos);
  CHECK(text.find("# temperature = 310\n") != std::string::npos);
  CHECK(text.find("# output") == std::string::npos);
  CHECK(text.find("# threads") == std::string::npos);
  CHECK(text.ends_with("tau_d_seconds\n0.077675714533724294\n"));
}

TEST_CASE("scoop-box scenario emits one row per event plus the start") {
  RunConfig config = default_config("scoop-box");
  config.n_particles = 1000;
  config.n_events = 5;
  config.seed = 7;

  std::ostringstream out;
  run_scenario(config, out);
  const std::string text = out.str();

  const std::string header = "time,pop_x,pop_y,captured_fraction,scoop_count\n";
  const auto header_at = text.find(header);
  REQUIRE(header_at != std::string::npos);
  const std::string body = text.substr(header_at + header.size());
  CHECK(count_char(body, '\n') == 6);
  std::istringstream rows(body);
  std::string row;
  double last_cf = -1.0;
  while (std::getline(rows, row)) {
    CHECK(count_char(row, ',') == 4);
    double t, px, py, cf, count;
    REQUIRE(std::sscanf(row.c_str(), "%lg,%lg,%lg,%lg,%lg", &t, &px, &py, &cf,
                        &count) == 5);
    CHECK(cf >= last_cf);
    last_cf = cf;
  }

  std::ostringstream again;
  run_scenario(config, again);
  CHECK(text == again.str());
}

TEST_CASE("flags override config files which override defaults") {
  RunConfig config = default_config("scoop-box");
  for (const auto& [key, value] : parse_config_text("delta = 2\nn_events = 9\n"))
    apply_key_value(config, key, value);
  CHECK(config.delta == 2.0);
  CHECK(config.n_events == 9);
  apply_key_value(config, "delta", "3");  // later application wins
  CHECK(config.delta == 3.0);
  CHECK(config.epsilon == 223.6);  // untouched default survives
}

TEST_CASE("cli: zurek flags give the frozen estimate") {
  const auto run = testing::run_command(
      quoted_cli() +
      " zurek --mass 1.6726e-27 --temperature 310 --displacement 1e-10"
      " --relaxation-time 1.0");
  CHECK(run.exit_code == 0);
  CHECK(run.output.ends_with("tau_d_seconds\n0.077675714533724294\n"));
  CHECK(run.output.find("# scenario = zurek\n") != std::string::npos);
}

TEST_CASE("cli: config file route and flag precedence") {
  const std::string path = testing::temp_path("cli_test_zurek.cfg");
  testing::write_file(path,
                      "scenario = zurek\n"
                      "mass = 1.6726e-27\n"
                      "temperature = 310\n"
                      "displacement = 1e-10\n"
                      "relaxation_time = 1.0\n");

  const auto from_file = testing::run_command(quoted_cli() + " --config " + path);
  CHECK(from_file.exit_code == 0);
  CHECK(from_file.output.ends_with("tau_d_seconds\n0.077675714533724294\n"));

  const auto overridden = testing::run_command(
      quoted_cli() + " zurek --config " + path + " --relaxation-time 2.0");
  CHECK(overridden.exit_code == 0);
  CHECK(overridden.output.find("# relaxation_time = 2\n") != std::string::npos);
  CHECK(overridden.output.ends_with("tau_d_seconds\n0.15535142906744859\n"));

  std::remove(path.c_str());
}

TEST_CASE("cli: output file matches stdout byte for byte") {
  const std::string path = testing::temp_path("cli_test_out.csv");
  const std::string base = quoted_cli() + " scoop-box --n-particles 500 --n-events 4";
  const auto to_stdout = testing::run_command(base);
  const auto to_file = testing::run_command(base + " --output " + path);
  CHECK(to_stdout.exit_code == 0);
  CHECK(to_file.exit_code == 0);
  CHECK(to_file.output.empty());
  CHECK(testing::read_file(path) == to_stdout.output);
  std::remove(path.c_str());
}

TEST_CASE("cli: identical runs and thread counts give identical bytes") {
  const std::string base = quoted_cli() +
                           " scoop-box --mode montecarlo --n-particles 2000"
                           " --n-events 10 --seed 5";
  const auto first = testing::run_command(base + " --threads 1");
  const auto second = testing::run_command(base + " --threads 1");
  const auto threaded = testing::run_command(base + " --threads 3");
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);
  CHECK(first.output == threaded.output);
  CHECK(first.output.find("# mode = montecarlo\n") != std::string::npos);
}

TEST_CASE("cli: failure modes exit with code 1") {
  const auto no_scenario = testing::run_command(quoted_cli() + " 2>&1");
  CHECK(no_scenario.exit_code == 1);
  CHECK(no_scenario.output.find("error:") != std::string::npos);

  const std::string path = testing::temp_path("cli_test_bad.cfg");
  testing::write_file(path, "scenario = zurek\nbogus = 1\n");
  const auto bad_key = testing::run_command(quoted_cli() + " --config " + path + " 2>&1");
  CHECK(bad_key.exit_code == 1);
  CHECK(bad_key.output.find("unknown key: bogus") != std::string::npos);
  std::remove(path.c_str());

  const auto bad_flag =
      testing::run_command(quoted_cli() + " zurek --mass notanumber 2>&1");
  CHECK(bad_flag.exit_code == 1);

  const auto bad_sub = testing::run_command(quoted_cli() + " warp-drive 2>&1");
  CHECK(bad_sub.exit_code == 1);

  const auto missing_inputs = testing::run_command(quoted_cli() + " zurek 2>&1");
  CHECK(missing_inputs.exit_code == 1);
}

TEST_CASE("cli: help exits cleanly and names every scenario") {
  const auto help = testing::run_command(quoted_cli() + " --help");
  CHECK(help.exit_code == 0);
  for (const char* name : {"scoop-box", "mutation", "zeno-scan", "alpha-decay", "zurek"})
    CHECK(help.output.find(name) != std::string::npos);
}
