#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cavityflip/io.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string format;
};

int run_mode(const char* mode, const CommonOptions& opts) {
  using namespace cavityflip;

  std::ifstream in(opts.config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config '" << opts.config_path << "'\n";
    return 5;
  }
  std::ostringstream text;
  text << in.rdbuf();

  RunConfig cfg;
  try {
    cfg = parse_config(text.str());
    if (mode_name(cfg.mode) != std::string(mode)) {
      throw ConfigError(std::string("config mode '") + mode_name(cfg.mode) +
                        "' does not match subcommand '" + mode + "'");
    }
    // Flags override the config scalars.
    if (!opts.format.empty()) {
      if (opts.format == "csv") {
        cfg.format = OutputFormat::Csv;
      } else if (opts.format == "json") {
        cfg.format = OutputFormat::Json;
      } else {
        throw ConfigError("--format must be 'csv' or 'json'");
      }
    }
    if (!opts.out_path.empty()) {
      cfg.out_path = opts.out_path;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return execute(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear optical response of a two-level atom in a one-sided bad cavity"};
  app.require_subcommand(1);

  static const char* kModes[] = {"steady",   "phase-spectrum", "intensity-sweep",
                                 "dynamics", "max-phase",      "verify-oracle"};
  static const char* kDescriptions[] = {
      "closed-form steady state and reflected field for one drive point",
      "nonlinear phase shift and weak-field reflectivity over omega/Gamma",
      "phase and reflectivity across the weak-to-strong intensity transition",
      "time-domain Bloch trajectory with the reflected field",
      "maximize the nonlinear phase shift over detuning",
      "check the eliminated model against the full atom-cavity master equation"};

  CommonOptions opts[6];
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(kModes[i], kDescriptions[i]);
    sub->add_option("--config", opts[i].config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", opts[i].out_path, "output path (overrides config)");
    sub->add_option("--format", opts[i].format, "csv or json (overrides config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    for (int i = 0; i < 6; ++i) {
      if (sub->get_name() == kModes[i]) {
        return run_mode(kModes[i], opts[i]);
      }
    }
  }
  return 2;
}
