#include "mcf/diagnostics.hpp"

#include "mcf/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

namespace mcf {

namespace {

void check_index(const PhaseState &state, std::size_t i) {
  if (i >= state.n_phases())
    throw IndexOutOfRange("phase index " + std::to_string(i) + " out of range for " +
                          std::to_string(state.n_phases()) + " phases");
}

// Chessboard distance from every node to the nearest marked node (periodic).
std::vector<int> chessboard_distance(const SpectralGrid &grid, const std::vector<bool> &marked) {
  const std::size_t n = grid.node_count();
  std::vector<int> dist(n, -1);
  std::deque<std::size_t> queue;
  for (std::size_t x = 0; x < n; ++x)
    if (marked[x]) {
      dist[x] = 0;
      queue.push_back(x);
    }
  const int d = grid.dim();
  int neighbours = 1;
  for (int a = 0; a < d; ++a)
    neighbours *= 3;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    const auto idx = grid.multi_index(x);
    for (int code = 0; code < neighbours; ++code) {
      std::array<int, SpectralGrid::kMaxDim> nb = idx;
      int c = code;
      bool self = true;
      for (int a = 0; a < d; ++a) {
        const int off = c % 3 - 1;
        c /= 3;
        nb[a] += off;
        self = self && off == 0;
      }
      if (self)
        continue;
      const std::size_t y = grid.flat_index(std::span<const int>(nb.data(), d));
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

} // namespace

double phase_mass(const PhaseState &state, std::size_t i) {
  check_index(state, i);
  double s = 0.0;
  for (double v : state.field(i).values())
    s += v;
  return s * state.grid().cell_volume();
}

RadiusEstimate effective_radius(const PhaseState &state, std::size_t i) {
  const int d = state.grid().dim();
  if (d != 2 && d != 3)
    throw DimensionMismatch("effective radius needs a 2D or 3D grid");
  const double mass = phase_mass(state, i);
  if (!(mass > 0.0))
    return {0.0, true};
  if (d == 2)
    return {std::sqrt(mass / std::numbers::pi), false};
  return {std::cbrt(3.0 * mass / (4.0 * std::numbers::pi)), false};
}

double exact_radius(double r0, double sigma, double mobility, double t) {
  const double arg = r0 * r0 - 2.0 * sigma * mobility * t;
  return arg > 0.0 ? std::sqrt(arg) : 0.0;
}

double constraint_error(const PhaseState &state) {
  const auto ptrs = state.field_pointers();
  return simd::active_kernels().constraint_error(ptrs.data(), ptrs.size(), state.node_count());
}

double phase_energy(const ScalarField &u, double epsilon) {
  const auto &grid = u.grid();
  FourierTransform fft(grid);
  const Spectrum c = fft.forward(u);
  const auto symbol = grid.negative_laplacian_half_spectrum();
  const int last = grid.dim() - 1;
  const int kl = grid.size(last);
  const int half = kl / 2 + 1;
  // int |grad u|^2 = |Q| sum_k 4 pi^2 |xi_k|^2 |c_k|^2 over the full spectrum;
  // interior columns of the half spectrum stand for themselves and their mirror.
  double grad2 = 0.0;
  const auto coeffs = c.half();
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const int col = static_cast<int>(j % static_cast<std::size_t>(half));
    const double weight = (col == 0 || col == kl / 2) ? 1.0 : 2.0;
    grad2 += weight * symbol[j] * std::norm(coeffs[j]);
  }
  grad2 *= grid.domain_volume();
  const double well =
      simd::active_kernels().double_well_sum(u.data(), u.size()) * grid.cell_volume();
  return 0.5 * epsilon * grad2 + well / epsilon;
}

double cahn_hilliard_energy(const PhaseState &state, const TensionSet &tensions, double epsilon) {
  if (tensions.n_phases() != state.n_phases())
    throw DimensionMismatch("tension set and state disagree on the number of phases");
  double e = 0.0;
  for (std::size_t i = 0; i < state.n_phases(); ++i) {
    const double s = tensions.sigma(i);
    if (s != 0.0)
      e += s * phase_energy(state.field(i), epsilon);
  }
  return e;
}

int interface_displacement(const PhaseState &a, const PhaseState &b, std::size_t i) {
  check_index(a, i);
  check_index(b, i);
  if (!(a.grid() == b.grid()))
    throw DimensionMismatch("states live on different grids");
  const auto &grid = a.grid();
  const std::size_t n = grid.node_count();
  std::vector<bool> in_a(n), in_b(n);
  bool any_a = false;
  bool any_b = false;
  for (std::size_t x = 0; x < n; ++x) {
    in_a[x] = a.field(i)[x] > 0.5;
    in_b[x] = b.field(i)[x] > 0.5;
    any_a = any_a || in_a[x];
    any_b = any_b || in_b[x];
  }
  if (!any_a && !any_b)
    return 0;
  if (any_a != any_b) {
    int widest = 0;
    for (int ax = 0; ax < grid.dim(); ++ax)
      widest = std::max(widest, grid.size(ax) / 2);
    return widest + 1;
  }
  const auto to_b = chessboard_distance(grid, in_b);
  const auto to_a = chessboard_distance(grid, in_a);
  int worst = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (in_a[x])
      worst = std::max(worst, to_b[x]);
    if (in_b[x])
      worst = std::max(worst, to_a[x]);
  }
  return worst;
}

std::vector<double> half_level_crossings(const PhaseState &state, std::size_t i, int axis,
                                         std::span<const int> line) {
  check_index(state, i);
  const auto &grid = state.grid();
  if (axis < 0 || axis >= grid.dim() || static_cast<int>(line.size()) != grid.dim())
    throw DimensionMismatch("line specification does not match the grid");
  std::array<int, SpectralGrid::kMaxDim> idx{0, 0, 0};
  std::copy(line.begin(), line.end(), idx.begin());
  const int k = grid.size(axis);
  const double h = grid.spacing(axis);
  const auto &u = state.field(i);
  auto value = [&](int j) {
    idx[axis] = j;
    return u[grid.flat_index(std::span<const int>(idx.data(), grid.dim()))];
  };
  std::vector<double> out;
  for (int j = 0; j < k; ++j) {
    const double v0 = value(j) - 0.5;
    const double v1 = value(j + 1 == k ? 0 : j + 1) - 0.5;
    if ((v0 > 0.0) != (v1 > 0.0)) {
      const double t = v0 / (v0 - v1);
      out.push_back(grid.origin(axis) + (j + t) * h);
    }
  }
  return out;
}

void TimeSeries::append(TimeSeriesRow row) {
  if (row.radius.size() != n_ || row.mass.size() != n_)
    throw InvalidArgument("time series row has the wrong number of phases");
  if (!rows_.empty() && !(row.time > rows_.back().time))
    throw InvalidArgument("time series times must increase strictly");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::isfinite(row.time) || !std::isfinite(row.constraint_error) ||
      !std::isfinite(row.energy) || !std::all_of(row.radius.begin(), row.radius.end(), finite) ||
      !std::all_of(row.mass.begin(), row.mass.end(), finite))
    throw InvalidArgument("time series entries must be finite");
  rows_.push_back(std::move(row));
}

void TimeSeries::record(const PhaseState &state, const TensionSet &tensions, double epsilon) {
  TimeSeriesRow row;
  row.time = state.time();
  for (std::size_t i = 0; i < state.n_phases(); ++i) {
    row.mass.push_back(phase_mass(state, i));
    row.radius.push_back(state.grid().dim() >= 2 ? effective_radius(state, i).radius : 0.0);
  }
  row.constraint_error = constraint_error(state);
  row.energy = cahn_hilliard_energy(state, tensions, epsilon);
  append(std::move(row));
}

void TimeSeries::write_csv(std::ostream &os) const {
  os << "time";
  for (std::size_t i = 1; i <= n_; ++i)
    os << ",R_" << i;
  for (std::size_t i = 1; i <= n_; ++i)
    os << ",mass_" << i;
  os << ",constraint_err,energy\n";
  const auto old_flags = os.flags();
  const auto old_precision = os.precision();
  os << std::setprecision(17);
  for (const auto &r : rows_) {
    os << r.time;
    for (double v : r.radius)
      os << ',' << v;
    for (double v : r.mass)
      os << ',' << v;
    os << ',' << r.constraint_error << ',' << r.energy << '\n';
  }
  os.flags(old_flags);
  os.precision(old_precision);
}

} // namespace mcf
