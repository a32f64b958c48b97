#pragma once

// Batch orchestration: resolve a RunConfig into solver inputs, evolve it with
// diagnostic and snapshot hooks, and write the artifacts.

#include "mcf/config.hpp"
#include "mcf/mobility.hpp"
#include "mcf/solver.hpp"
#include "mcf/tension.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mcf {

struct ResolvedRun {
  SpectralGrid grid;
  TensionSet tensions;
  MobilitySet mobilities;
  HarmonicDecomposition decomposition;
  DecompositionReport decomposition_report;
  SolverParams params;
  /// True when sparse mode was requested but the mobilities are not harmonically additive.
  bool sparse_fallback = false;
  std::string fallback_reason;
};

/// Throws ConfigInvalid, TensionsNotAdditive.
ResolvedRun resolve(const RunConfig &config);

struct ValidationReport {
  bool ok = false;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::vector<std::string> lines;

  void print(std::ostream &os) const;
};

/// Structural checks without time stepping; never throws on bad input.
ValidationReport validate_config(const RunConfig &config);

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;
  std::optional<long> snapshot_every;
  bool quiet = false;
};

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInvalid = 2, kExitNonFinite = 3 };

/// Runs the configuration and writes diagnostics.csv, fields_* snapshots and
/// composite_*.pgm images. Errors are reported on `err` and mapped to an exit code.
int run(const RunConfig &config, const RunOptions &options, std::ostream &out, std::ostream &err);

} // namespace mcf
