// dre-sim: command-line front end for the dense reader simulator.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dre/engine.hpp"
#include "dre/scenario.hpp"

namespace {

enum Exit { kOk = 0, kBadArgs = 1, kConfig = 2, kFault = 3 };

dre::ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dre::ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return dre::parse_config(text.str());
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense reader environment simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::uint64_t seed = 0;

  auto* simulate = app.add_subcommand("simulate", "Run one configured scenario, print a CSV row");
  simulate->add_option("--config", config_path, "Config file")->required();
  auto* seed_opt = simulate->add_option("--seed", seed, "Override the config seed");
  simulate->add_option("--output", output, "CSV destination (default stdout)");

  std::string preset_name;
  std::vector<int> reader_counts{100, 200, 300, 400};
  int seeds = 1;
  std::uint64_t base_seed = 1;
  int rounds = -1;
  auto* sweep = app.add_subcommand("sweep", "Run a preset over reader counts and seeds");
  sweep->add_option("--preset", preset_name, "scenario1 .. scenario5, optional -literal suffix")->required();
  sweep->add_option("--readers", reader_counts, "Comma separated reader counts")->delimiter(',');
  sweep->add_option("--seeds", seeds, "Seeds per point (base, base+1, ...)")->check(CLI::PositiveNumber);
  sweep->add_option("--base-seed", base_seed, "First seed");
  sweep->add_option("--rounds", rounds, "Override rounds per run")->check(CLI::NonNegativeNumber);
  sweep->add_option("--output", output, "CSV destination (default stdout)");

  int k = 0;
  int m = 0;
  auto* dist = app.add_subcommand("dist", "Print the SIFT slot distribution");
  dist->add_option("--k", k, "Slots")->required()->check(CLI::PositiveNumber);
  dist->add_option("--m", m, "Maximum competitors")->required()->check(CLI::PositiveNumber);

  std::string events_path;
  auto* replay = app.add_subcommand("replay", "Run a config and dump its event log");
  replay->add_option("--config", config_path, "Config file")->required();
  auto* replay_seed = replay->add_option("--seed", seed, "Override the config seed");
  replay->add_option("--events", events_path, "Event log destination")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArgs;
  }

  try {
    if (*simulate) {
      dre::ScenarioConfig c = load_config(config_path);
      if (*seed_opt) c.seed = seed;
      const dre::MetricsReport r = dre::run_simulation(c);
      write_output(output, dre::emit_csv(std::span(&r, 1)));
    } else if (*sweep) {
      std::vector<dre::ScenarioConfig> runs;
      for (int n : reader_counts) {
        if (n < 0) throw dre::ConfigError("reader counts must be nonnegative");
        for (const auto& base : dre::preset(preset_name, n)) {
          for (int i = 0; i < seeds; ++i) {
            dre::ScenarioConfig c = base;
            c.seed = base_seed + static_cast<std::uint64_t>(i);
            if (rounds >= 0) c.rounds = rounds;
            runs.push_back(std::move(c));
          }
        }
      }
      const auto reports = dre::run_batch(runs, dre::threads_from_env());
      write_output(output, dre::emit_csv(reports));
    } else if (*dist) {
      std::cout << dre::distribution_csv(k, m);
    } else if (*replay) {
      dre::ScenarioConfig c = load_config(config_path);
      if (*replay_seed) c.seed = seed;
      dre::EventLog log;
      const dre::MetricsReport r = dre::run_simulation(c, &log);
      std::ofstream out(events_path);
      if (!out) throw std::runtime_error("cannot write " + events_path);
      log.write(out);
      std::cout << dre::emit_csv(std::span(&r, 1));
    }
  } catch (const dre::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const dre::SimulationFault& e) {
    std::cerr << "simulation fault: " << e.what() << '\n';
    return kFault;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad argument: " << e.what() << '\n';
    return kBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFault;
  }
  return kOk;
}
