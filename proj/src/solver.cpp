#include "mcf/solver.hpp"

#include "mcf/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace mcf {

void SolverParams::check() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw InvalidArgument("epsilon must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidArgument("dt must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("alpha must be nonnegative");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw InvalidArgument("beta must be positive");
  if (n_steps < 0)
    throw InvalidArgument("n_steps must be nonnegative");
}

PhaseState::PhaseState(const SpectralGrid &grid, std::size_t n_phases, double time)
    : fields_(n_phases, ScalarField(grid)), time_(time) {
  if (n_phases == 0)
    throw InvalidArgument("a phase state needs at least one phase");
}

PhaseState::PhaseState(std::vector<ScalarField> fields, double time)
    : fields_(std::move(fields)), time_(time) {
  if (fields_.empty())
    throw InvalidArgument("a phase state needs at least one phase");
  for (const auto &f : fields_)
    if (!(f.grid() == fields_.front().grid()))
      throw DimensionMismatch("phase fields live on different grids");
}

std::vector<const double *> PhaseState::field_pointers() const {
  std::vector<const double *> out;
  out.reserve(fields_.size());
  for (const auto &f : fields_)
    out.push_back(f.data());
  return out;
}

SplittingScheme::SplittingScheme(const SpectralGrid &grid, const TensionSet &tensions,
                                 const HarmonicDecomposition &dec, const SolverParams &params)
    : grid_(grid), params_(params), n_phases_(dec.n_phases()), fft_(grid) {
  params_.check();
  if (tensions.n_phases() != n_phases_)
    throw DimensionMismatch("tensions have " + std::to_string(tensions.n_phases()) +
                            " phases, mobility decomposition has " + std::to_string(n_phases_));

  const auto &k = simd::active_kernels();
  const auto symbol = grid_.negative_laplacian_half_spectrum();
  const double eps2 = params_.epsilon * params_.epsilon;
  const double c = params_.alpha / eps2;
  const double scale = 1.0 / static_cast<double>(grid_.node_count());

  explicit_coeff_.assign(n_phases_, 0.0);
  helmholtz_factor_.assign(n_phases_, {});
  frozen_.assign(n_phases_, false);
  inv_dt_mstar_.assign(n_phases_, 0.0);
  for (std::size_t p = 0; p < n_phases_; ++p) {
    const double m_star = dec.m_star()[p];
    frozen_[p] = m_star == 0.0;
    inv_dt_mstar_[p] = 1.0 / (params_.dt * std::max(m_star, params_.beta));
    const double a = params_.dt * m_star * tensions.sigma(p);
    if (a == 0.0)
      continue;
    explicit_coeff_[p] = a / eps2;
    helmholtz_factor_[p].resize(symbol.size());
    k.helmholtz_factors(symbol.data(), helmholtz_factor_[p].data(), symbol.size(), a, c, scale);
  }

  for (const auto &comp : dec.components()) {
    if (comp.is_zero())
      continue;
    const auto &coeffs = comp.phase_coeffs();
    for (std::size_t p = 0; p < n_phases_; ++p) {
      if (coeffs[p] == 0.0)
        continue;
      comp_phase_.push_back(static_cast<std::uint32_t>(p));
      comp_coeff_.push_back(coeffs[p]);
    }
    comp_offsets_.push_back(static_cast<std::uint32_t>(comp_phase_.size()));
  }
}

void SplittingScheme::check_state(const PhaseState &state) const {
  if (state.n_phases() != n_phases_)
    throw DimensionMismatch("state has " + std::to_string(state.n_phases()) +
                            " phases, scheme expects " + std::to_string(n_phases_));
  if (!(state.grid() == grid_))
    throw DimensionMismatch("state grid differs from the scheme grid");
}

PhaseState SplittingScheme::step1_decoupled(const PhaseState &state) {
  check_state(state);
  const auto &k = simd::active_kernels();
  PhaseState out = state;
  const std::size_t n = grid_.node_count();
  for (std::size_t p = 0; p < n_phases_; ++p) {
    if (helmholtz_factor_[p].empty())
      continue;
    auto real = fft_.real_buffer();
    k.allen_cahn_explicit(state.field(p).data(), real.data(), n, explicit_coeff_[p],
                          params_.alpha);
    fft_.execute_forward();
    auto spec = fft_.spectrum_buffer();
    k.scale_spectrum(spec.data(), helmholtz_factor_[p].data(), spec.size());
    fft_.execute_inverse();
    std::memcpy(out.field(p).data(), real.data(), n * sizeof(double));
  }
  return out;
}

PhaseState SplittingScheme::step2_project(const PhaseState &half, const PhaseState &prev) const {
  check_state(half);
  check_state(prev);
  PhaseState out = half;
  if (comp_phase_.empty())
    return out;

  const auto u_half = half.field_pointers();
  const auto u_prev = prev.field_pointers();
  std::vector<double *> dst(n_phases_);
  for (std::size_t p = 0; p < n_phases_; ++p)
    dst[p] = out.field(p).data();

  simd::ProjectionArgs args;
  args.n_nodes = grid_.node_count();
  args.n_phases = n_phases_;
  args.n_components = comp_offsets_.size() - 1;
  args.u_half = u_half.data();
  args.u_prev = u_prev.data();
  args.out = dst.data();
  args.offsets = comp_offsets_.data();
  args.phase = comp_phase_.data();
  args.coeff = comp_coeff_.data();
  args.inv_dt_mstar = inv_dt_mstar_.data();
  args.dt = params_.dt;
  args.beta = params_.beta;
  simd::active_kernels().project(args);

  // Immobile phases carry no multiplier; keep them bit-exact.
  for (std::size_t p = 0; p < n_phases_; ++p)
    if (frozen_[p])
      out.field(p) = half.field(p);
  return out;
}

PhaseState SplittingScheme::step(const PhaseState &state) {
  PhaseState next = step2_project(step1_decoupled(state), state);
  next.set_time(state.time() + params_.dt);
  return next;
}

PhaseState step1_decoupled(const PhaseState &state, const TensionSet &tensions,
                           const HarmonicDecomposition &dec, const SolverParams &params) {
  return SplittingScheme(state.grid(), tensions, dec, params).step1_decoupled(state);
}

PhaseState step2_project(const PhaseState &half, const PhaseState &prev,
                         const HarmonicDecomposition &dec, const SolverParams &params) {
  // Step 2 does not depend on tensions.
  const TensionSet unit(uniform_pairs(dec.n_phases(), 1.0),
                        std::vector<double>(dec.n_phases(), 0.5));
  return SplittingScheme(half.grid(), unit, dec, params).step2_project(half, prev);
}

PhaseState step(const PhaseState &state, const TensionSet &tensions,
                const HarmonicDecomposition &dec, const SolverParams &params) {
  return SplittingScheme(state.grid(), tensions, dec, params).step(state);
}

PhaseState evolve(PhaseState state, const TensionSet &tensions, const HarmonicDecomposition &dec,
                  const SolverParams &params, std::span<const StepHook> hooks) {
  params.check();
  const double t0 = state.time();
  auto fire = [&](long n, bool final_step) {
    for (const auto &h : hooks)
      if (h.callback && (n % std::max(h.every, 1L) == 0 || final_step))
        h.callback(state, n);
  };
  fire(0, params.n_steps == 0);
  if (params.n_steps == 0)
    return state;

  SplittingScheme scheme(state.grid(), tensions, dec, params);
  for (long n = 1; n <= params.n_steps; ++n) {
    state = scheme.step(state);
    state.set_time(t0 + static_cast<double>(n) * params.dt);
    for (std::size_t p = 0; p < state.n_phases(); ++p)
      if (!state.field(p).all_finite())
        throw NonFiniteField(n, p);
    fire(n, n == params.n_steps);
  }
  return state;
}

} // namespace mcf
