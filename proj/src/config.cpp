#include "mcf/config.hpp"

#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mcf {

namespace {

using Path = std::string;

[[noreturn]] void fail(const Path &path, const std::string &what) {
  throw ConfigInvalid(path, what);
}

double number_at(const toml::node &node, const Path &path) {
  if (auto v = node.value<double>())
    return *v;
  fail(path, "expected a number");
}

double required_number(const toml::table &t, const std::string &key, const Path &path) {
  const auto *node = t.get(key);
  if (!node)
    fail(path + "." + key, "missing");
  return number_at(*node, path + "." + key);
}

std::vector<double> number_array(const toml::node &node, const Path &path) {
  const auto *arr = node.as_array();
  if (!arr)
    fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr->size(); ++i)
    out.push_back(number_at(*arr->get(i), path + "[" + std::to_string(i) + "]"));
  return out;
}

const toml::table &table_at(const toml::table &root, const std::string &key) {
  const auto *t = root.get_as<toml::table>(key);
  if (!t)
    fail(key, "missing table");
  return *t;
}

ScaledValue scaled_at(const toml::table &t, const std::string &key, const Path &path) {
  const auto *node = t.get(key);
  if (!node)
    fail(path, "missing");
  if (auto v = node->value<double>())
    return ScaledValue{*v, 0};
  if (auto s = node->value<std::string>()) {
    try {
      return parse_scaled_value(*s);
    } catch (const InvalidArgument &e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected a number or a string like \"1.5/K\"");
}

std::size_t phase_label(const toml::node &node, std::size_t n, const Path &path) {
  auto v = node.value<int64_t>();
  if (!v)
    fail(path, "expected an integer phase label");
  if (*v < 1 || static_cast<std::size_t>(*v) > n)
    fail(path, "phase " + std::to_string(*v) + " outside 1.." + std::to_string(n));
  return static_cast<std::size_t>(*v - 1);
}

// Pairwise coefficients from `uniform`, `pairs` or `matrix`; every entry
// must be a finite nonnegative number.
PairMatrix pair_matrix(const toml::table &t, std::size_t n, const Path &path) {
  PairMatrix m(n);
  auto check = [&](double v, const Path &where) {
    if (!std::isfinite(v) || v < 0.0)
      fail(where, "value " + std::to_string(v) + " must be finite and nonnegative");
  };
  if (const auto *u = t.get("uniform")) {
    const double v = number_at(*u, path + ".uniform");
    check(v, path + ".uniform");
    return uniform_pairs(n, v);
  }
  if (const auto *pairs = t.get_as<toml::array>("pairs")) {
    std::vector<bool> seen(n * n, false);
    for (std::size_t e = 0; e < pairs->size(); ++e) {
      const Path where = path + ".pairs[" + std::to_string(e) + "]";
      const auto *entry = pairs->get(e)->as_array();
      if (!entry || entry->size() != 3)
        fail(where, "expected [i, j, value]");
      const std::size_t i = phase_label(*entry->get(0), n, where);
      const std::size_t j = phase_label(*entry->get(1), n, where);
      if (i == j)
        fail(where, "pairs need two distinct phases");
      const double v = number_at(*entry->get(2), where);
      check(v, where);
      if (seen[i * n + j])
        fail(where, "pair listed twice");
      seen[i * n + j] = seen[j * n + i] = true;
      m.set_pair(i, j, v);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!seen[i * n + j])
          fail(path + ".pairs", "missing pair (" + std::to_string(i + 1) + ", " +
                                    std::to_string(j + 1) + ")");
    return m;
  }
  if (const auto *rows = t.get_as<toml::array>("matrix")) {
    if (rows->size() != n)
      fail(path + ".matrix", "expected " + std::to_string(n) + " rows");
    for (std::size_t i = 0; i < n; ++i) {
      const Path row_path = path + ".matrix[" + std::to_string(i) + "]";
      const auto row = number_array(*rows->get(i), row_path);
      if (row.size() != n)
        fail(row_path, "expected " + std::to_string(n) + " columns");
      for (std::size_t j = 0; j < n; ++j) {
        const Path where = row_path + "[" + std::to_string(j) + "]";
        check(row[j], where);
        if (i == j && row[j] != 0.0)
          fail(where, "diagonal entries must be zero");
        m(i, j) = row[j];
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (m(i, j) != m(j, i))
          fail(path + ".matrix", "not symmetric at (" + std::to_string(i + 1) + ", " +
                                     std::to_string(j + 1) + ")");
    return m;
  }
  fail(path, "expected `uniform`, `pairs` or `matrix`");
}

Point point_at(const toml::table &t, const std::string &key, int dim, const Path &path) {
  const auto *node = t.get(key);
  if (!node)
    fail(path + "." + key, "missing");
  const auto v = number_array(*node, path + "." + key);
  if (static_cast<int>(v.size()) != dim)
    fail(path + "." + key, "expected " + std::to_string(dim) + " coordinates");
  Point p{0.0, 0.0, 0.0};
  std::copy(v.begin(), v.end(), p.begin());
  return p;
}

std::string type_of(const toml::table &t, const Path &path) {
  auto type = t["type"].value<std::string>();
  if (!type)
    fail(path + ".type", "missing shape type");
  return *type;
}

Shape shape_at(const toml::table &t, int dim, std::size_t phase,
               const std::filesystem::path &base_dir, const Path &path) {
  const std::string type = type_of(t, path);
  auto parts = [&](const std::string &key) {
    const auto *arr = t.get_as<toml::array>(key);
    if (!arr || arr->empty())
      fail(path + "." + key, "expected a nonempty array of shapes");
    std::vector<Shape> out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const Path sub = path + "." + key + "[" + std::to_string(i) + "]";
      const auto *st = arr->get(i)->as_table();
      if (!st)
        fail(sub, "expected a shape table");
      out.push_back(shape_at(*st, dim, phase, base_dir, sub));
    }
    return out;
  };
  try {
    if (type == "ball") {
      const double r = required_number(t, "radius", path);
      if (!(r >= 0.0))
        fail(path + ".radius", "must be nonnegative");
      return make_ball(point_at(t, "center", dim, path), r);
    }
    if (type == "half_space")
      return make_half_space(point_at(t, "normal", dim, path),
                             required_number(t, "offset", path));
    if (type == "union")
      return make_union(parts("parts"));
    if (type == "intersection")
      return make_intersection(parts("parts"));
    if (type == "complement") {
      const auto *inner = t.get_as<toml::table>("shape");
      if (!inner)
        fail(path + ".shape", "missing inner shape");
      return make_complement(shape_at(*inner, dim, phase, base_dir, path + ".shape"));
    }
    if (type == "raster") {
      auto image = t["image"].value<std::string>();
      auto labels = t["labels"].value<std::string>();
      if (!image || !labels)
        fail(path, "raster shapes need `image` and `labels` paths");
      std::size_t label_phase = phase;
      if (const auto *p = t.get("phase"))
        label_phase = phase_label(*p, 1u << 30, path + ".phase");
      auto img = std::make_shared<const LabelImage>(
          LabelImage::load(base_dir / *image, base_dir / *labels));
      if (img->dim() != dim)
        fail(path + ".image", "image dimension differs from the grid");
      if (!img->has_phase(label_phase))
        fail(path + ".labels", "no pixel value maps to phase " + std::to_string(label_phase + 1));
      return make_raster(std::move(img), label_phase);
    }
  } catch (const ConfigInvalid &) {
    throw;
  } catch (const Error &e) {
    fail(path, e.what());
  }
  fail(path + ".type", "unknown shape type \"" + type + "\"");
}

} // namespace

double ScaledValue::resolve(int k) const { return coefficient / std::pow(double(k), power); }

std::string ScaledValue::describe() const {
  std::ostringstream os;
  os << coefficient;
  if (power == 1)
    os << "/K";
  else if (power == 2)
    os << "/K^2";
  return os.str();
}

ScaledValue parse_scaled_value(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  int power = 0;
  std::string number = s;
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    number = s.substr(0, slash);
    const std::string denom = s.substr(slash + 1);
    if (denom == "K")
      power = 1;
    else if (denom == "K^2" || denom == "K**2" || denom == "K\xc2\xb2")
      power = 2;
    else
      throw InvalidArgument("unsupported denominator \"" + denom + "\" (use K or K^2)");
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(number, &used);
  } catch (const std::exception &) {
    throw InvalidArgument("\"" + std::string(text) + "\" is not a number");
  }
  if (used != number.size())
    throw InvalidArgument("\"" + std::string(text) + "\" is not a number");
  return ScaledValue{value, power};
}

int RunConfig::resolution() const {
  return sizes.empty() ? 1 : *std::max_element(sizes.begin(), sizes.end());
}

long RunConfig::resolved_steps() const {
  if (n_steps)
    return *n_steps;
  if (t_end)
    return static_cast<long>(std::ceil(*t_end / resolved_dt() - 1e-9));
  return 0;
}

RunConfig parse_config(std::string_view toml_text, const std::filesystem::path &base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error &e) {
    std::ostringstream os;
    os << e.description() << " at line " << e.source().begin.line;
    throw ConfigInvalid("<toml>", os.str());
  }

  RunConfig cfg;
  const auto &grid = table_at(root, "grid");
  const auto dim = grid["dim"].value<int64_t>();
  if (!dim || (*dim != 2 && *dim != 3))
    fail("grid.dim", "must be 2 or 3");
  cfg.dim = static_cast<int>(*dim);
  if (const auto *size = grid.get("size")) {
    auto k = size->value<int64_t>();
    if (!k)
      fail("grid.size", "expected an integer");
    cfg.sizes.assign(cfg.dim, static_cast<int>(*k));
  } else if (const auto *sizes = grid.get_as<toml::array>("sizes")) {
    for (std::size_t i = 0; i < sizes->size(); ++i) {
      auto k = sizes->get(i)->value<int64_t>();
      if (!k)
        fail("grid.sizes[" + std::to_string(i) + "]", "expected an integer");
      cfg.sizes.push_back(static_cast<int>(*k));
    }
  } else {
    fail("grid.sizes", "missing");
  }
  if (static_cast<int>(cfg.sizes.size()) != cfg.dim)
    fail("grid.sizes", "expected " + std::to_string(cfg.dim) + " entries");
  for (std::size_t a = 0; a < cfg.sizes.size(); ++a)
    if (cfg.sizes[a] < 2 || cfg.sizes[a] % 2 != 0)
      fail("grid.sizes[" + std::to_string(a) + "]", "must be even and >= 2");
  if (const auto *len = grid.get("lengths"))
    cfg.lengths = number_array(*len, "grid.lengths");
  else
    cfg.lengths.assign(cfg.dim, 1.0);
  if (static_cast<int>(cfg.lengths.size()) != cfg.dim)
    fail("grid.lengths", "expected " + std::to_string(cfg.dim) + " entries");
  for (std::size_t a = 0; a < cfg.lengths.size(); ++a)
    if (!(cfg.lengths[a] > 0.0))
      fail("grid.lengths[" + std::to_string(a) + "]", "must be positive");
  if (const auto *o = grid.get("origin")) {
    cfg.origin = number_array(*o, "grid.origin");
    if (static_cast<int>(cfg.origin.size()) != cfg.dim)
      fail("grid.origin", "expected " + std::to_string(cfg.dim) + " entries");
  }

  const auto count = table_at(root, "phases")["count"].value<int64_t>();
  if (!count || *count < 2)
    fail("phases.count", "must be an integer >= 2");
  cfg.n_phases = static_cast<std::size_t>(*count);

  cfg.sigma_pairs = pair_matrix(table_at(root, "tensions"), cfg.n_phases, "tensions");
  const auto &mob = table_at(root, "mobilities");
  cfg.mobility_pairs = pair_matrix(mob, cfg.n_phases, "mobilities");
  const std::string mode = mob["decomposition"].value_or(std::string("canonical"));
  if (mode == "canonical") {
    cfg.decomposition = DecompositionMode::canonical;
  } else if (mode == "sparse") {
    cfg.decomposition = DecompositionMode::sparse;
  } else if (mode == "explicit") {
    cfg.decomposition = DecompositionMode::explicit_list;
    const auto *comps = mob.get_as<toml::array>("components");
    if (!comps || comps->empty())
      fail("mobilities.components", "explicit decomposition needs a nonempty component list");
    for (std::size_t p = 0; p < comps->size(); ++p) {
      const Path where = "mobilities.components[" + std::to_string(p) + "]";
      auto c = number_array(*comps->get(p), where);
      if (c.size() != cfg.n_phases)
        fail(where, "expected " + std::to_string(cfg.n_phases) + " coefficients");
      for (std::size_t k = 0; k < c.size(); ++k)
        if (!std::isfinite(c[k]) || c[k] < 0.0)
          fail(where + "[" + std::to_string(k) + "]", "must be finite and nonnegative");
      cfg.explicit_components.push_back(std::move(c));
    }
  } else {
    fail("mobilities.decomposition", "expected canonical, sparse or explicit");
  }

  const auto &num = table_at(root, "numerics");
  cfg.epsilon = scaled_at(num, "epsilon", "numerics.epsilon");
  cfg.dt = scaled_at(num, "dt", "numerics.dt");
  if (!(cfg.epsilon.coefficient > 0.0))
    fail("numerics.epsilon", "must be positive");
  if (!(cfg.dt.coefficient > 0.0))
    fail("numerics.dt", "must be positive");
  if (const auto *a = num.get("alpha"))
    cfg.alpha = number_at(*a, "numerics.alpha");
  if (!(cfg.alpha >= 0.0))
    fail("numerics.alpha", "must be nonnegative");
  if (const auto *b = num.get("beta"))
    cfg.beta = number_at(*b, "numerics.beta");
  if (!(cfg.beta > 0.0))
    fail("numerics.beta", "must be positive");
  if (const auto *n = num.get("n_steps")) {
    auto v = n->value<int64_t>();
    if (!v || *v < 0)
      fail("numerics.n_steps", "must be a nonnegative integer");
    cfg.n_steps = static_cast<long>(*v);
  }
  if (const auto *t = num.get("t_end")) {
    cfg.t_end = number_at(*t, "numerics.t_end");
    if (!(*cfg.t_end >= 0.0))
      fail("numerics.t_end", "must be nonnegative");
  }
  if (cfg.n_steps && cfg.t_end)
    fail("numerics", "give either n_steps or t_end, not both");
  if (!cfg.n_steps && !cfg.t_end)
    fail("numerics", "one of n_steps or t_end is required");

  if (const auto *out = root.get_as<toml::table>("output")) {
    if (auto d = (*out)["directory"].value<std::string>())
      cfg.output_dir = base_dir / *d;
    if (const auto *s = out->get("snapshot_every")) {
      auto v = s->value<int64_t>();
      if (!v || *v < 0)
        fail("output.snapshot_every", "must be a nonnegative integer");
      cfg.snapshot_every = static_cast<long>(*v);
    }
    if (const auto *s = out->get("diagnostic_every")) {
      auto v = s->value<int64_t>();
      if (!v || *v < 1)
        fail("output.diagnostic_every", "must be a positive integer");
      cfg.diagnostic_every = static_cast<long>(*v);
    }
    if (const auto *w = out->get("composite_weights")) {
      cfg.composite_weights = number_array(*w, "output.composite_weights");
      if (cfg.composite_weights.size() != cfg.n_phases)
        fail("output.composite_weights", "expected one weight per phase");
    }
    cfg.axis_slices = (*out)["axis_slices"].value_or(false);
  } else {
    cfg.output_dir = base_dir / "out";
  }

  const auto *shapes = root.get_as<toml::array>("shapes");
  const std::size_t n_shapes = shapes ? shapes->size() : 0;
  if (n_shapes != cfg.n_phases - 1)
    fail("shapes", "expected " + std::to_string(cfg.n_phases - 1) +
                       " shapes (the last phase is the ambient one), got " +
                       std::to_string(n_shapes));
  for (std::size_t i = 0; i < n_shapes; ++i) {
    const Path where = "shapes[" + std::to_string(i) + "]";
    const auto *t = shapes->get(i)->as_table();
    if (!t)
      fail(where, "expected a shape table");
    cfg.shapes.push_back(shape_at(*t, cfg.dim, i, base_dir, where));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigInvalid(path.string(), "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

} // namespace mcf
