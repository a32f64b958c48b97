#pragma once

#include "mcf/solver.hpp"
#include "mcf/tension.hpp"

#include <iosfwd>
#include <vector>

namespace mcf {

/// Grid quadrature of u_i. Throws IndexOutOfRange.
double phase_mass(const PhaseState &state, std::size_t i);

struct RadiusEstimate {
  double radius = 0.0;
  bool extinct = false;
};

/// Radius of the disk (2D) or ball (3D) with the same mass as phase i.
/// Nonpositive mass reports radius 0 and extinct. Throws DimensionMismatch for d = 1.
RadiusEstimate effective_radius(const PhaseState &state, std::size_t i);

/// sqrt(r0^2 - 2 sigma m t), or 0 once the argument is negative.
double exact_radius(double r0, double sigma, double mobility, double t);

/// max over nodes of |1 - sum_k u_k|.
double constraint_error(const PhaseState &state);

/// int (eps |grad u|^2 / 2 + W(u) / eps) dx with the gradient taken spectrally.
double phase_energy(const ScalarField &u, double epsilon);

/// sum_i sigma_i * phase_energy(u_i). Each diffuse interface between phases
/// i and j contributes about c_W sigma_ij per unit area.
double cahn_hilliard_energy(const PhaseState &state, const TensionSet &tensions, double epsilon);

/// Symmetric Hausdorff distance, in grid cells (chessboard metric, periodic),
/// between the {u_i > 1/2} node sets of two states on the same grid.
/// Identical sets give 0; one empty set against a nonempty one gives the
/// largest possible distance plus one.
int interface_displacement(const PhaseState &a, const PhaseState &b, std::size_t i);

/// Positions along `axis` where u_i crosses 1/2 on the grid line through
/// `line` (the other coordinates fixed at their node indices), linearly
/// interpolated, in physical coordinates, sorted ascending.
std::vector<double> half_level_crossings(const PhaseState &state, std::size_t i, int axis,
                                         std::span<const int> line);

struct TimeSeriesRow {
  double time = 0.0;
  std::vector<double> radius;
  std::vector<double> mass;
  double constraint_error = 0.0;
  double energy = 0.0;
};

/// Diagnostics sampled along a run. Rows must come in strictly increasing time.
class TimeSeries {
public:
  explicit TimeSeries(std::size_t n_phases) : n_(n_phases) {}

  /// Throws InvalidArgument on non-increasing time, wrong width, or non-finite entries.
  void append(TimeSeriesRow row);
  void record(const PhaseState &state, const TensionSet &tensions, double epsilon);

  const std::vector<TimeSeriesRow> &rows() const noexcept { return rows_; }
  std::size_t n_phases() const noexcept { return n_; }

  /// Header: time,R_1..R_N,mass_1..mass_N,constraint_err,energy
  void write_csv(std::ostream &os) const;

private:
  std::size_t n_;
  std::vector<TimeSeriesRow> rows_;
};

} // namespace mcf
