#include "mcf/config.hpp"
#include "mcf/run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
  CLI::App app{"Multiphase mean curvature flow with arbitrary mobilities"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  long snapshot_every = -1;
  bool quiet = false;

  auto *run = app.add_subcommand("run", "Evolve a configuration and write its outputs");
  run->add_option("config", config_path, "TOML run configuration")->required();
  run->add_option("--output-dir", output_dir, "Output directory (overrides the config)");
  run->add_option("--snapshot-every", snapshot_every,
                  "Snapshot interval in steps; 0 writes the initial and final state only")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--quiet,-q", quiet, "Suppress progress output");

  auto *validate = app.add_subcommand("validate", "Check a configuration without running it");
  validate->add_option("config", config_path, "TOML run configuration")->required();

  CLI11_PARSE(app, argc, argv);

  mcf::RunConfig cfg;
  try {
    cfg = mcf::load_config(config_path);
  } catch (const mcf::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return mcf::kExitInvalid;
  }

  if (*validate) {
    const auto report = mcf::validate_config(cfg);
    report.print(std::cout);
    return report.ok ? mcf::kExitOk : mcf::kExitInvalid;
  }

  mcf::RunOptions options;
  options.quiet = quiet;
  if (!output_dir.empty())
    options.output_dir = output_dir;
  if (snapshot_every >= 0)
    options.snapshot_every = snapshot_every;
  try {
    return mcf::run(cfg, options, std::cout, std::cerr);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return mcf::kExitUsage;
  }
}
