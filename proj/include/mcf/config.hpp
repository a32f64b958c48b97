#pragma once

// Run configuration read from TOML. Phase labels in config files are 1-based
// (m_12 is the mobility between phases 1 and 2); the API is 0-based.

#include "mcf/error.hpp"
#include "mcf/geometry.hpp"
#include "mcf/mobility.hpp"
#include "mcf/pair_matrix.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcf {

/// A length or time given either absolutely or as c / K^power.
struct ScaledValue {
  double coefficient = 0.0;
  int power = 0;

  double resolve(int k) const;
  std::string describe() const;
};

/// Parses "0.004", "1.5/K", "0.25/K^2" or "0.25/K²". Throws InvalidArgument.
ScaledValue parse_scaled_value(std::string_view text);

class TensionsNotAdditive : public ConfigInvalid {
public:
  explicit TensionsNotAdditive(const std::string &reason)
      : ConfigInvalid("tensions", "not additive: " + reason) {}
};

struct RunConfig {
  int dim = 2;
  std::vector<int> sizes;
  std::vector<double> lengths;
  std::vector<double> origin;

  std::size_t n_phases = 0;
  PairMatrix sigma_pairs;
  PairMatrix mobility_pairs;
  DecompositionMode decomposition = DecompositionMode::canonical;
  std::vector<std::vector<double>> explicit_components;

  ScaledValue epsilon;
  ScaledValue dt;
  double alpha = 0.0;
  double beta = 2.220446049250313e-16;
  std::optional<double> t_end;
  std::optional<long> n_steps;

  long snapshot_every = 0;
  long diagnostic_every = 10;
  std::vector<double> composite_weights;
  bool axis_slices = false;
  std::filesystem::path output_dir = "out";

  std::vector<Shape> shapes;

  /// K used to resolve "c/K" forms: the largest grid size.
  int resolution() const;
  double resolved_epsilon() const { return epsilon.resolve(resolution()); }
  double resolved_dt() const { return dt.resolve(resolution()); }
  /// n_steps if given, else ceil(t_end / dt).
  long resolved_steps() const;
};

/// Throws ConfigInvalid with the dotted path of the first bad entry.
/// Relative paths (raster images, output directory) resolve against base_dir.
RunConfig parse_config(std::string_view toml_text, const std::filesystem::path &base_dir = {});
RunConfig load_config(const std::filesystem::path &path);

} // namespace mcf
