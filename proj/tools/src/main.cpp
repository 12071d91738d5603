#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <sentinel/errors.hpp>

#include "sentinel_app/commands.hpp"
#include "sentinel_app/config.hpp"

namespace {

struct Overrides {
  std::string config;
  std::vector<std::pair<std::string, std::string>> keys;
};

// Registers the shared flags on a subcommand; each one maps onto a config key.
void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Run configuration file (key = value)");
  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  static const Flag flags[] = {
      {"--dataset", "dataset", "Dataset CSV"},
      {"--sensors", "sensors", "Comma-separated sensor subset"},
      {"--boundary", "boundary", "sphere | ellipsoid | both"},
      {"--out", "out", "Output directory"},
      {"--seed", "seed", "RNG seed (synth)"},
      {"--model", "model", "Model bundle directory (default <out>/model)"},
      {"--events", "events", "Event directory (default <out>/events)"},
      {"--workers", "workers", "Per-sensor worker threads"},
      {"--format", "event_format", "Event file format: csv | jsonl"},
  };
  for (const auto& f : flags) {
    cmd->add_option_function<std::string>(
        f.name, [&o, key = std::string(f.key)](const std::string& v) { o.keys.emplace_back(key, v); },
        f.help);
  }
}

sentinel::app::RunConfig resolve(const Overrides& o) {
  sentinel::app::RunConfig config =
      o.config.empty() ? sentinel::app::RunConfig{} : sentinel::app::load_config(o.config);
  sentinel::app::apply_environment(config);
  for (const auto& [key, value] : o.keys) {
    try {
      sentinel::app::set_key(config, key, value);
    } catch (const sentinel::ParameterError& e) {
      throw sentinel::ParameterError(std::string("flag: ") + e.what());
    }
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subspace anomaly detection for industrial sensor streams"};
  app.require_subcommand(1);

  Overrides o;
  auto* train = app.add_subcommand("train", "Fit per-sensor subspace models and boundaries");
  auto* score = app.add_subcommand("score", "Replay a dataset through trained detectors");
  auto* eval = app.add_subcommand("eval", "Compute detection reports from scored events");
  auto* synth = app.add_subcommand("synth", "Write the synthetic attack scenario suite");
  for (auto* cmd : {train, score, eval, synth}) add_common(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto config = resolve(o);
    if (train->parsed()) sentinel::app::cmd_train(config, std::cout);
    if (score->parsed()) sentinel::app::cmd_score(config, std::cout);
    if (eval->parsed()) sentinel::app::cmd_eval(config, std::cout);
    if (synth->parsed()) sentinel::app::cmd_synth(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "sentinel: error: " << e.what() << '\n';
    return sentinel::app::exit_code_for(e);
  }
  return 0;
}
