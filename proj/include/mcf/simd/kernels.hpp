#pragma once

// Pointwise kernels behind the solver and diagnostics, with one table per
// instruction set. Every variant evaluates the same operation sequence with
// no fused multiply-add, so elementwise kernels agree bit for bit across
// tables; only reductions (double_well_sum) may differ by summation order.

#include <complex>
#include <cstddef>
#include <cstdint>

namespace mcf::simd {

enum class Isa { scalar, avx2 };

const char *to_string(Isa isa) noexcept;

/// Inputs of the multiplier projection. Components are stored sparsely:
/// component p owns entries [offsets[p], offsets[p+1]) of (phase, coeff).
struct ProjectionArgs {
  std::size_t n_nodes = 0;
  std::size_t n_phases = 0;
  std::size_t n_components = 0;
  const double *const *u_half = nullptr;
  const double *const *u_prev = nullptr;
  double *const *out = nullptr;
  const std::uint32_t *offsets = nullptr;
  const std::uint32_t *phase = nullptr;
  const double *coeff = nullptr;
  /// 1 / (dt max(m_k^*, beta)) per phase.
  const double *inv_dt_mstar = nullptr;
  double dt = 0.0;
  double beta = 0.0;
};

struct KernelTable {
  Isa isa;

  /// out = u - coeff (W'(u) - alpha u)
  void (*allen_cahn_explicit)(const double *u, double *out, std::size_t n, double coeff,
                              double alpha);

  /// factor = scale / (1 + a (symbol + c))
  void (*helmholtz_factors)(const double *symbol, double *factor, std::size_t n, double a,
                            double c, double scale);

  /// spec[j] *= factor[j]
  void (*scale_spectrum)(std::complex<double> *spec, const double *factor, std::size_t n);

  /// Per node: w_k = |u_k (1 - u_k)| + beta, a_k = (u_k - u_k^prev) inv_dt_mstar_k,
  /// lambda_p = -sum_k m_k^p a_k / sum_k m_k^p w_k,
  /// out_k = u_k + dt (sum_p m_k^p lambda_p) w_k.
  void (*project)(const ProjectionArgs &args);

  /// max_x |1 - sum_k fields[k][x]|, phases summed in index order.
  double (*constraint_error)(const double *const *fields, std::size_t n_fields, std::size_t n);

  /// sum_x W(u[x])
  double (*double_well_sum)(const double *u, std::size_t n);

  bool (*all_finite)(const double *u, std::size_t n);
};

const KernelTable &scalar_kernels() noexcept;

/// nullptr when the build or the running CPU lacks the instruction set.
const KernelTable *kernels_for(Isa isa) noexcept;

/// Chosen once per process: MCF_SIMD=scalar|avx2 overrides, otherwise the
/// widest table the CPU supports.
const KernelTable &active_kernels() noexcept;

} // namespace mcf::simd
