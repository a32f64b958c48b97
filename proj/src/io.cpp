#include "mcf/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace mcf::io {

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b)
      r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
    return r;
  }
  return v;
}

} // namespace

void write_raw_field(const std::filesystem::path &path, const ScalarField &field) {
  std::vector<std::uint64_t> words(field.size());
  for (std::size_t i = 0; i < field.size(); ++i)
    words[i] = to_little_endian(std::bit_cast<std::uint64_t>(field[i]));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(words.data()),
            static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
}

ScalarField read_raw_field(const std::filesystem::path &path, const SpectralGrid &grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot read " + path.string());
  const auto bytes = std::filesystem::file_size(path);
  if (bytes != grid.node_count() * sizeof(double))
    throw SizeMismatch(path.string() + " holds " + std::to_string(bytes) + " bytes, expected " +
                       std::to_string(grid.node_count() * sizeof(double)));
  std::vector<std::uint64_t> words(grid.node_count());
  in.read(reinterpret_cast<char *>(words.data()), static_cast<std::streamsize>(bytes));
  std::vector<double> values(words.size());
  for (std::size_t i = 0; i < words.size(); ++i)
    values[i] = std::bit_cast<double>(to_little_endian(words[i]));
  return ScalarField(grid, std::move(values));
}

nlohmann::json snapshot_sidecar(const PhaseState &state, long step, std::size_t phase) {
  const auto &g = state.grid();
  nlohmann::json j;
  std::vector<int> sizes;
  std::vector<double> lengths, origin;
  for (int a = 0; a < g.dim(); ++a) {
    sizes.push_back(g.size(a));
    lengths.push_back(g.length(a));
    origin.push_back(g.origin(a));
  }
  j["sizes"] = sizes;
  j["lengths"] = lengths;
  j["origin"] = origin;
  j["time"] = state.time();
  j["step"] = step;
  j["phase"] = phase + 1;
  j["n_phases"] = state.n_phases();
  j["dtype"] = "float64";
  j["byte_order"] = "little";
  j["layout"] = "row-major, axis 0 slowest";
  return j;
}

SpectralGrid grid_from_sidecar(const nlohmann::json &sidecar) {
  return SpectralGrid(sidecar.at("sizes").get<std::vector<int>>(),
                      sidecar.at("lengths").get<std::vector<double>>(),
                      sidecar.value("origin", std::vector<double>{}));
}

std::string snapshot_stem(long step, std::size_t phase) {
  std::ostringstream os;
  os << "fields_" << std::setw(6) << std::setfill('0') << step << '_' << phase + 1;
  return os.str();
}

std::string composite_name(long step, const std::string &suffix) {
  std::ostringstream os;
  os << "composite_" << std::setw(6) << std::setfill('0') << step << suffix << ".pgm";
  return os.str();
}

void write_snapshot(const std::filesystem::path &dir, const PhaseState &state, long step) {
  for (std::size_t k = 0; k < state.n_phases(); ++k) {
    const std::string stem = snapshot_stem(step, k);
    write_raw_field(dir / (stem + ".raw"), state.field(k));
    std::ofstream js(dir / (stem + ".json"), std::ios::trunc);
    js << std::setw(2) << snapshot_sidecar(state, step, k) << '\n';
  }
}

std::vector<double> default_composite_weights(std::size_t n_phases) {
  if (n_phases == 3)
    return {0.0, 2.0, 1.0};
  std::vector<double> w(n_phases);
  for (std::size_t k = 0; k < n_phases; ++k)
    w[k] = static_cast<double>(k);
  return w;
}

GrayImage composite_image(const PhaseState &state, const std::vector<double> &weights,
                          int normal_axis) {
  if (weights.size() != state.n_phases())
    throw DimensionMismatch("composite weights must have one entry per phase");
  const auto &g = state.grid();
  const double lo = *std::min_element(weights.begin(), weights.end());
  const double hi = *std::max_element(weights.begin(), weights.end());
  const double span = hi - lo;

  std::array<int, 2> axes{0, 1};
  int fixed_axis = -1;
  if (g.dim() == 3) {
    if (normal_axis < 0 || normal_axis > 2)
      throw InvalidArgument("slice axis must be 0, 1 or 2");
    fixed_axis = normal_axis;
    int next = 0;
    for (int a = 0; a < 3; ++a)
      if (a != normal_axis)
        axes[next++] = a;
  } else if (g.dim() != 2) {
    throw DimensionMismatch("composite images need a 2D or 3D state");
  }

  GrayImage img;
  img.height = g.size(axes[0]);
  img.width = g.size(axes[1]);
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  std::array<int, 3> idx{0, 0, 0};
  if (fixed_axis >= 0)
    idx[fixed_axis] = g.size(fixed_axis) / 2;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      idx[axes[0]] = r;
      idx[axes[1]] = c;
      const std::size_t x = g.flat_index(std::span<const int>(idx.data(), g.dim()));
      double v = 0.0;
      for (std::size_t k = 0; k < weights.size(); ++k)
        v += weights[k] * state.field(k)[x];
      const double t = span > 0.0 ? (v - lo) / span : 0.0;
      img.pixels[static_cast<std::size_t>(r) * img.width + c] =
          static_cast<std::uint8_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path &path, const GrayImage &image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot write " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char *>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
}

GrayImage read_pgm(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  GrayImage img;
  int maxval = 0;
  in >> magic >> img.width >> img.height >> maxval;
  in.get();
  if (!in || magic != "P5" || maxval != 255)
    throw Error(path.string() + " is not an 8-bit binary PGM");
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char *>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  return img;
}

} // namespace mcf::io
