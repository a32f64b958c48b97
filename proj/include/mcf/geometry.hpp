#pragma once

// Signed-distance shapes (negative inside, positive outside) and phase
// initialization through the optimal profile.

#include "mcf/grid.hpp"
#include "mcf/solver.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace mcf {

using Point = std::array<double, SpectralGrid::kMaxDim>;

/// Label image with its exact Euclidean signed-distance fields, one per
/// phase label, mapped onto a box [origin, origin + lengths].
class LabelImage {
public:
  /// sizes: 2 or 3 extents, axis 0 slowest (image rows for 2D).
  /// pixels: row-major raw 8-bit values. label_of: pixel value -> phase index (0-based).
  LabelImage(std::vector<int> sizes, std::vector<std::uint8_t> pixels,
             std::map<int, std::size_t> label_of);

  /// 8-bit binary PGM (P5), or headerless raw bytes whose extents come from
  /// the sidecar. The JSON sidecar holds {"labels": {"<pixel>": <phase>, ...}}
  /// with 1-based phases, plus "sizes" for raw input.
  static LabelImage load(const std::filesystem::path &image, const std::filesystem::path &sidecar);

  int dim() const noexcept { return static_cast<int>(sizes_.size()); }
  const std::vector<int> &sizes() const noexcept { return sizes_; }
  bool has_phase(std::size_t phase) const;

  /// Signed distance (in pixel units) at fractional pixel coordinates,
  /// multilinearly interpolated and clamped at the image border.
  double signed_distance_pixels(std::size_t phase, const Point &pixel_coords) const;

private:
  std::vector<int> sizes_;
  std::map<std::size_t, std::vector<double>> distance_;
};

struct Shape;

struct Ball {
  Point center{};
  double radius = 0.0;
};

/// {x : normal . x < offset}; the normal is normalized on construction of the Shape.
struct HalfSpace {
  Point normal{};
  double offset = 0.0;
};

struct Union {
  std::vector<Shape> parts;
};

struct Intersection {
  std::vector<Shape> parts;
};

struct Complement {
  std::shared_ptr<const Shape> inner;
};

struct RasterLabel {
  std::shared_ptr<const LabelImage> image;
  std::size_t phase = 0;
};

struct Shape {
  std::variant<Ball, HalfSpace, Union, Intersection, Complement, RasterLabel> node;
};

Shape make_ball(Point center, double radius);
Shape make_half_space(Point normal, double offset);
Shape make_union(std::vector<Shape> parts);
Shape make_intersection(std::vector<Shape> parts);
Shape make_complement(Shape inner);
Shape make_raster(std::shared_ptr<const LabelImage> image, std::size_t phase);

/// Exact for balls (nearest periodic image) and half-spaces; min/max
/// composition for unions/intersections, which is exact only for simple
/// configurations such as disjoint parts.
double signed_distance(const Shape &shape, const Point &x, const SpectralGrid &domain);

/// u_i = profile(d_i / epsilon) for the n - 1 shapes, and the last (ambient)
/// phase is 1 - sum of the others, so the partition holds node by node.
PhaseState init_phases(const SpectralGrid &grid, const std::vector<Shape> &shapes,
                       double epsilon);

/// Human-readable warnings for shapes whose interiors overlap on the grid.
std::vector<std::string> check_shape_separation(const SpectralGrid &grid,
                                                const std::vector<Shape> &shapes);

} // namespace mcf
