#include "mcf/geometry.hpp"

#include "mcf/potential.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mcf {

namespace {

constexpr double kFar = 1e20;

// Squared Euclidean distance transform of a sampled function along one line
// (lower envelope of parabolas).
void edt_line(const double *f, double *d, int n, std::vector<int> &v, std::vector<double> &z) {
  v.resize(n);
  z.resize(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto intersect = [&](int q, int p) {
    return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
  };
  for (int q = 1; q < n; ++q) {
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q)
      ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

// Separable squared EDT over an nD row-major array (one pass per axis).
std::vector<double> squared_edt(std::vector<double> f, const std::vector<int> &sizes) {
  const int dim = static_cast<int>(sizes.size());
  std::vector<int> v;
  std::vector<double> z, line, out;
  for (int axis = 0; axis < dim; ++axis) {
    const int n = sizes[axis];
    std::size_t stride = 1;
    for (int a = axis + 1; a < dim; ++a)
      stride *= static_cast<std::size_t>(sizes[a]);
    const std::size_t total = f.size();
    const std::size_t block = stride * static_cast<std::size_t>(n);
    line.resize(n);
    out.resize(n);
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (int i = 0; i < n; ++i)
          line[i] = f[base + off + i * stride];
        edt_line(line.data(), out.data(), n, v, z);
        for (int i = 0; i < n; ++i)
          f[base + off + i * stride] = out[i];
      }
    }
  }
  return f;
}

double wrap_delta(double d, double length) {
  return d - length * std::round(d / length);
}

Point normalized(Point n) {
  const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (!(len > 0.0))
    throw InvalidArgument("half-space normal must be nonzero");
  for (auto &c : n)
    c /= len;
  return n;
}

} // namespace

LabelImage::LabelImage(std::vector<int> sizes, std::vector<std::uint8_t> pixels,
                       std::map<int, std::size_t> label_of)
    : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2 || sizes_.size() > 3)
    throw InvalidArgument("label images must be 2D or 3D");
  std::size_t total = 1;
  for (int s : sizes_) {
    if (s < 1)
      throw InvalidArgument("label image extents must be positive");
    total *= static_cast<std::size_t>(s);
  }
  if (pixels.size() != total)
    throw SizeMismatch("label image has " + std::to_string(pixels.size()) + " pixels, expected " +
                       std::to_string(total));

  std::map<std::size_t, std::vector<bool>> member;
  for (const auto &[value, phase] : label_of)
    member.try_emplace(phase, std::vector<bool>(total, false));
  for (std::size_t i = 0; i < total; ++i) {
    auto it = label_of.find(pixels[i]);
    if (it != label_of.end())
      member[it->second][i] = true;
  }
  for (const auto &[phase, in] : member) {
    std::vector<double> to_inside(total), to_outside(total);
    for (std::size_t i = 0; i < total; ++i) {
      to_inside[i] = in[i] ? 0.0 : kFar;
      to_outside[i] = in[i] ? kFar : 0.0;
    }
    const auto d_in = squared_edt(std::move(to_inside), sizes_);
    const auto d_out = squared_edt(std::move(to_outside), sizes_);
    std::vector<double> sd(total);
    // Half-pixel shift puts the zero level between unlike neighbours.
    for (std::size_t i = 0; i < total; ++i)
      sd[i] = in[i] ? -(std::sqrt(d_out[i]) - 0.5) : std::sqrt(d_in[i]) - 0.5;
    distance_.emplace(phase, std::move(sd));
  }
}

bool LabelImage::has_phase(std::size_t phase) const { return distance_.count(phase) != 0; }

double LabelImage::signed_distance_pixels(std::size_t phase, const Point &pc) const {
  auto it = distance_.find(phase);
  if (it == distance_.end())
    return kFar;
  const auto &sd = it->second;
  const int d = dim();
  std::array<int, 3> lo{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int a = 0; a < d; ++a) {
    const double c = std::clamp(pc[a], 0.0, double(sizes_[a] - 1));
    lo[a] = std::min(static_cast<int>(std::floor(c)), std::max(sizes_[a] - 2, 0));
    frac[a] = sizes_[a] > 1 ? c - lo[a] : 0.0;
  }
  double value = 0.0;
  const int corners = 1 << d;
  for (int corner = 0; corner < corners; ++corner) {
    double weight = 1.0;
    std::size_t flat = 0;
    for (int a = 0; a < d; ++a) {
      const int bit = (corner >> a) & 1;
      const int i = std::min(lo[a] + bit, sizes_[a] - 1);
      weight *= bit ? frac[a] : 1.0 - frac[a];
      flat = flat * static_cast<std::size_t>(sizes_[a]) + static_cast<std::size_t>(i);
    }
    if (weight != 0.0)
      value += weight * sd[flat];
  }
  return value;
}

LabelImage LabelImage::load(const std::filesystem::path &image,
                            const std::filesystem::path &sidecar) {
  std::ifstream js(sidecar);
  if (!js)
    throw InvalidArgument("cannot open label sidecar " + sidecar.string());
  const auto meta = nlohmann::json::parse(js);
  std::map<int, std::size_t> label_of;
  for (const auto &[key, value] : meta.at("labels").items()) {
    const int phase = value.get<int>();
    if (phase < 1)
      throw InvalidArgument("label sidecar phases are 1-based");
    label_of[std::stoi(key)] = static_cast<std::size_t>(phase - 1);
  }

  std::ifstream in(image, std::ios::binary);
  if (!in)
    throw InvalidArgument("cannot open label image " + image.string());
  std::vector<int> sizes;
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] == 'P' && magic[1] == '5') {
    auto next_int = [&in]() {
      int c = in.peek();
      while (std::isspace(c) || c == '#') {
        if (c == '#')
          in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
        else
          in.get();
        c = in.peek();
      }
      int v = 0;
      in >> v;
      return v;
    };
    const int width = next_int();
    const int height = next_int();
    const int maxval = next_int();
    in.get();
    if (maxval < 1 || maxval > 255)
      throw InvalidArgument("only 8-bit PGM label images are supported");
    sizes = {height, width};
  } else {
    in.seekg(0);
    if (!meta.contains("sizes"))
      throw InvalidArgument("raw label images need \"sizes\" in the sidecar");
    sizes = meta.at("sizes").get<std::vector<int>>();
  }
  std::size_t total = 1;
  for (int s : sizes)
    total *= static_cast<std::size_t>(std::max(s, 0));
  std::vector<std::uint8_t> pixels(total);
  in.read(reinterpret_cast<char *>(pixels.data()), static_cast<std::streamsize>(total));
  if (static_cast<std::size_t>(in.gcount()) != total)
    throw SizeMismatch("label image " + image.string() + " is truncated");
  return LabelImage(std::move(sizes), std::move(pixels), std::move(label_of));
}

Shape make_ball(Point center, double radius) {
  if (!(radius >= 0.0))
    throw InvalidArgument("ball radius must be nonnegative");
  return Shape{Ball{center, radius}};
}

Shape make_half_space(Point normal, double offset) {
  return Shape{HalfSpace{normalized(normal), offset}};
}

Shape make_union(std::vector<Shape> parts) { return Shape{Union{std::move(parts)}}; }

Shape make_intersection(std::vector<Shape> parts) {
  return Shape{Intersection{std::move(parts)}};
}

Shape make_complement(Shape inner) {
  return Shape{Complement{std::make_shared<const Shape>(std::move(inner))}};
}

Shape make_raster(std::shared_ptr<const LabelImage> image, std::size_t phase) {
  if (!image)
    throw InvalidArgument("raster shape needs an image");
  return Shape{RasterLabel{std::move(image), phase}};
}

double signed_distance(const Shape &shape, const Point &x, const SpectralGrid &domain) {
  const int d = domain.dim();
  struct Visitor {
    const Point &x;
    const SpectralGrid &domain;
    int d;

    double operator()(const Ball &b) const {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double delta = wrap_delta(x[a] - b.center[a], domain.length(a));
        r2 += delta * delta;
      }
      return std::sqrt(r2) - b.radius;
    }
    double operator()(const HalfSpace &h) const {
      double dot = 0.0;
      for (int a = 0; a < d; ++a)
        dot += h.normal[a] * x[a];
      return dot - h.offset;
    }
    double operator()(const Union &u) const {
      double best = kFar;
      for (const auto &p : u.parts)
        best = std::min(best, signed_distance(p, x, domain));
      return best;
    }
    double operator()(const Intersection &u) const {
      double best = -kFar;
      for (const auto &p : u.parts)
        best = std::max(best, signed_distance(p, x, domain));
      return best;
    }
    double operator()(const Complement &c) const { return -signed_distance(*c.inner, x, domain); }
    double operator()(const RasterLabel &r) const {
      const auto &img = *r.image;
      if (img.dim() != d)
        throw DimensionMismatch("label image dimension differs from the grid");
      Point pc{0.0, 0.0, 0.0};
      double spacing = 1.0;
      for (int a = 0; a < d; ++a) {
        const double px = domain.length(a) / img.sizes()[a];
        pc[a] = (x[a] - domain.origin(a)) / px - 0.5;
        spacing *= px;
      }
      spacing = std::pow(spacing, 1.0 / d);
      return img.signed_distance_pixels(r.phase, pc) * spacing;
    }
  };
  return std::visit(Visitor{x, domain, d}, shape.node);
}

PhaseState init_phases(const SpectralGrid &grid, const std::vector<Shape> &shapes,
                       double epsilon) {
  if (!(epsilon > 0.0))
    throw InvalidArgument("epsilon must be positive");
  const std::size_t n = shapes.size() + 1;
  PhaseState state(grid, n);
  const std::size_t nodes = grid.node_count();
  for (std::size_t x = 0; x < nodes; ++x) {
    const Point p = grid.node(x);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double u = potential::profile(signed_distance(shapes[i], p, grid) / epsilon);
      state.field(i)[x] = u;
      sum = sum + u;
    }
    state.field(n - 1)[x] = 1.0 - sum;
  }
  return state;
}

std::vector<std::string> check_shape_separation(const SpectralGrid &grid,
                                                const std::vector<Shape> &shapes) {
  std::vector<std::string> warnings;
  const std::size_t m = shapes.size();
  std::vector<std::size_t> overlap(m * m, 0);
  std::vector<double> d(m);
  for (std::size_t x = 0; x < grid.node_count(); ++x) {
    const Point p = grid.node(x);
    for (std::size_t i = 0; i < m; ++i)
      d[i] = signed_distance(shapes[i], p, grid);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (d[i] < 0.0 && d[j] < 0.0)
          ++overlap[i * m + j];
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (overlap[i * m + j] > 0) {
        std::ostringstream os;
        os << "shapes for phases " << i + 1 << " and " << j + 1 << " overlap on "
           << overlap[i * m + j] << " grid nodes";
        warnings.push_back(os.str());
      }
  return warnings;
}

} // namespace mcf
