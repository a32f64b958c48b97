#pragma once

// Snapshot files: one little-endian float64 raw file per phase, row-major with
// axis 0 slowest and no header, next to a JSON sidecar describing the grid.
// Composite images are binary 8-bit PGM (P5).

#include "mcf/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mcf::io {

void write_raw_field(const std::filesystem::path &path, const ScalarField &field);
/// Throws SizeMismatch if the file length does not match the grid.
ScalarField read_raw_field(const std::filesystem::path &path, const SpectralGrid &grid);

nlohmann::json snapshot_sidecar(const PhaseState &state, long step, std::size_t phase);
/// Rebuilds the grid described by a sidecar.
SpectralGrid grid_from_sidecar(const nlohmann::json &sidecar);

std::string snapshot_stem(long step, std::size_t phase);
std::string composite_name(long step, const std::string &suffix = "");

/// fields_<step>_<phase>.raw/.json for every phase (phase labels 1-based).
void write_snapshot(const std::filesystem::path &dir, const PhaseState &state, long step);

/// Default composite weights: (0, 2, 1) for three phases, 0, 1, ..., N-1 otherwise.
std::vector<double> default_composite_weights(std::size_t n_phases);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// v = sum_k w_k u_k mapped linearly from [min w, max w] to [0, 255]. For 3D
/// states the slice at index K/2 along `normal_axis` is taken; for 2D the
/// whole field (rows = axis 0). normal_axis is ignored in 2D.
GrayImage composite_image(const PhaseState &state, const std::vector<double> &weights,
                          int normal_axis = 2);

void write_pgm(const std::filesystem::path &path, const GrayImage &image);
GrayImage read_pgm(const std::filesystem::path &path);

} // namespace mcf::io
