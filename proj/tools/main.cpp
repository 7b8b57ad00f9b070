// fracmem: switching of fractional-order memristors from the command line.
#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>

namespace {

using fracmem::RunConfig;

struct Overrides {
  std::string config;
  std::vector<std::string> settings;  // --set key=value
  std::vector<std::pair<std::string, std::string>> flags;
};

// Flags are recorded in a fixed order and applied after the config file.
void add_common(CLI::App* sub, Overrides& ov, bool with_config) {
  if (with_config) sub->add_option("--config", ov.config, "Config file (key = value lines)");
  sub->add_option("--set", ov.settings, "Override any config key, e.g. --set step=1e-3")->type_name("KEY=VALUE");
  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  static const Flag flags[] = {
      {"--out", "out", "Output path"},
      {"--jobs", "jobs", "Worker threads for sweep / multi-alpha optimize"},
      {"--seed", "seed", "Optimizer seed"},
      {"--alpha", "alpha", "Derivative order (clears the alphas list)"},
      {"--beta", "beta", "Current exponent (clears the betas list)"},
      {"--A", "A", "Memristance offset"},
      {"--B", "B", "Memristance slope"},
      {"--kappa", "kappa", "State-rate prefactor"},
      {"--x0", "x0", "Initial state"},
      {"--x1", "x1", "Target state"},
      {"--t1", "t1", "Switching deadline"},
      {"--min-width", "min_pulse_width", "Minimal pulse width"},
  };
  for (const auto& f : flags) {
    const std::string key = f.key;
    sub->add_option_function<std::string>(
        f.name, [&ov, key](const std::string& v) { ov.flags.emplace_back(key, v); }, f.help);
  }
}

RunConfig build_config(std::string_view preset, const Overrides& ov) {
  RunConfig cfg;
  if (!preset.empty()) {
    cfg = fracmem::parse_config(fracmem::cli::preset_text(preset), "preset " + std::string(preset));
  } else if (!ov.config.empty()) {
    cfg = fracmem::load_config(ov.config);
  }
  auto apply = [&cfg](const std::string& key, const std::string& value) {
    try {
      fracmem::apply_setting(cfg, key, value);
    } catch (const fracmem::ConfigError& e) {
      throw fracmem::ConfigError("command line", 0, key, e.what());
    }
  };
  for (const auto& kv : ov.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw fracmem::ConfigError("command line", 0, "set", "expected KEY=VALUE, got '" + kv + "'");
    apply(kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& [key, value] : ov.flags) {
    apply(key, value);
    if (key == "alpha") apply("alphas", "");
    if (key == "beta") apply("betas", "");
  }
  try {
    cfg.validate();
  } catch (const fracmem::ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw fracmem::ConfigError("command line", 0, "", e.what());
  }
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-power switching of fractional-order memristors"};
  app.require_subcommand(1);

  Overrides ov;
  std::string figure;
  std::string chosen;
  const std::map<std::string_view, std::string> about = {
      {"simulate", "Single-pulse trajectories checked against the numerical oracle"},
      {"amplitude", "Amplitude that switches the device with one pulse, and its losses"},
      {"energy-scan", "Losses of the single switching pulse against its width"},
      {"optimize", "Two-pulse minimum-loss control"},
      {"sweep", "Regime map over (alpha, beta) and its boundary lines"},
  };
  for (auto name : fracmem::cli::command_names()) {
    auto* sub = app.add_subcommand(std::string(name), about.at(name));
    add_common(sub, ov, true);
    sub->callback([&chosen, name] { chosen = name; });
  }
  auto* fig = app.add_subcommand("figure", "Reproduce a figure dataset from a bundled preset");
  fig->add_option("name", figure, "Preset name")
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>(fracmem::cli::preset_names().begin(),
                                                     fracmem::cli::preset_names().end())));
  add_common(fig, ov, false);
  auto* presets = app.add_subcommand("presets", "List bundled figure presets");
  auto* show = app.add_subcommand("show-config", "Print the effective configuration");
  add_common(show, ov, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout.flush();
    std::cerr << fracmem::cli::error_line("usage", 2, e.what()) << '\n';
    return 2;
  }

  try {
    if (presets->parsed()) {
      for (auto name : fracmem::cli::preset_names()) std::cout << name << '\n';
      return 0;
    }
    if (show->parsed()) {
      std::cout << fracmem::serialize_config(build_config("", ov));
      return 0;
    }
    if (fig->parsed()) {
      const RunConfig cfg = build_config(figure, ov);
      if (cfg.command.empty()) throw fracmem::ConfigError("preset " + figure, 0, "command", "missing");
      fracmem::cli::dispatch(cfg.command, cfg, std::cout);
      return 0;
    }
    fracmem::cli::dispatch(chosen, build_config("", ov), std::cout);
    return 0;
  } catch (const std::exception& e) {
    const auto report = fracmem::cli::error_report(e);
    std::cout.flush();
    std::cerr << report.line << '\n';
    return report.exit_code;
  }
}
