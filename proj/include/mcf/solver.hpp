#pragma once

// Two-step splitting for the multiphase Allen-Cahn system with decomposed
// mobilities:
//   1. per phase, a stabilized semi-implicit Allen-Cahn step solved in Fourier
//      space with rate m_k^* sigma_k;
//   2. an explicit projection with per-component multipliers that restores
//      sum_k u_k exactly (up to round-off) and leaves immobile phases untouched.

#include "mcf/grid.hpp"
#include "mcf/mobility.hpp"
#include "mcf/tension.hpp"

#include <cfloat>
#include <functional>
#include <span>
#include <vector>

namespace mcf {

struct SolverParams {
  double epsilon = 0.0;
  double dt = 0.0;
  double alpha = 0.0;
  double beta = DBL_EPSILON;
  long n_steps = 0;
  DecompositionMode decomposition = DecompositionMode::canonical;

  /// Throws InvalidArgument unless epsilon, dt, beta > 0, alpha >= 0, n_steps >= 0.
  void check() const;
};

/// N phase fields on one grid at one time.
class PhaseState {
public:
  PhaseState(const SpectralGrid &grid, std::size_t n_phases, double time = 0.0);
  /// Throws DimensionMismatch if the fields live on different grids.
  explicit PhaseState(std::vector<ScalarField> fields, double time = 0.0);

  const SpectralGrid &grid() const noexcept { return fields_.front().grid(); }
  std::size_t n_phases() const noexcept { return fields_.size(); }
  std::size_t node_count() const noexcept { return fields_.front().size(); }

  const ScalarField &field(std::size_t k) const { return fields_.at(k); }
  ScalarField &field(std::size_t k) { return fields_.at(k); }
  const std::vector<ScalarField> &fields() const noexcept { return fields_; }

  double time() const noexcept { return time_; }
  void set_time(double t) noexcept { time_ = t; }

  std::vector<const double *> field_pointers() const;

  bool operator==(const PhaseState &) const = default;

private:
  std::vector<ScalarField> fields_;
  double time_ = 0.0;
};

class SplittingScheme {
public:
  /// Throws DimensionMismatch if tensions and decomposition disagree on N.
  SplittingScheme(const SpectralGrid &grid, const TensionSet &tensions,
                  const HarmonicDecomposition &dec, const SolverParams &params);

  const SolverParams &params() const noexcept { return params_; }

  /// Decoupled stabilized Allen-Cahn step. Phases with dt m_k^* sigma_k = 0
  /// are copied through unchanged.
  PhaseState step1_decoupled(const PhaseState &state);

  /// Regularized multiplier projection of the half step against the previous state.
  PhaseState step2_project(const PhaseState &half, const PhaseState &prev) const;

  /// Both steps; advances time by dt.
  PhaseState step(const PhaseState &state);

private:
  void check_state(const PhaseState &state) const;

  SpectralGrid grid_;
  SolverParams params_;
  std::size_t n_phases_;
  FourierTransform fft_;
  // Per phase: explicit coefficient dt m^* sigma / eps^2, and the mode-wise
  // Helmholtz factor (empty when the phase is not advanced by step 1).
  std::vector<double> explicit_coeff_;
  std::vector<std::vector<double>> helmholtz_factor_;
  std::vector<bool> frozen_;
  std::vector<double> inv_dt_mstar_;
  std::vector<std::uint32_t> comp_offsets_{0};
  std::vector<std::uint32_t> comp_phase_;
  std::vector<double> comp_coeff_;
};

PhaseState step1_decoupled(const PhaseState &state, const TensionSet &tensions,
                           const HarmonicDecomposition &dec, const SolverParams &params);
PhaseState step2_project(const PhaseState &half, const PhaseState &prev,
                         const HarmonicDecomposition &dec, const SolverParams &params);
PhaseState step(const PhaseState &state, const TensionSet &tensions,
                const HarmonicDecomposition &dec, const SolverParams &params);

/// Read-only callback fired on step 0, every `every` steps, and on the final step.
struct StepHook {
  long every = 1;
  std::function<void(const PhaseState &, long step)> callback;
};

/// Applies params.n_steps steps. Throws NonFiniteField as soon as a field
/// stops being finite. Time after step n is start time + n dt.
PhaseState evolve(PhaseState state, const TensionSet &tensions, const HarmonicDecomposition &dec,
                  const SolverParams &params, std::span<const StepHook> hooks = {});

} // namespace mcf
