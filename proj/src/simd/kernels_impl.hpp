#pragma once

#include "mcf/simd/kernels.hpp"

namespace mcf::simd::detail {

// Shared scalar expressions; the vector variants mirror these operation orders.
inline double allen_cahn_explicit_one(double u, double coeff, double alpha) {
  const double t = u * (1.0 - u);
  const double wp = t * (1.0 - 2.0 * u);
  return u - coeff * (wp - alpha * u);
}

inline double double_well_one(double u) {
  const double t = u * (1.0 - u);
  return 0.5 * (t * t);
}

void project_range_scalar(const ProjectionArgs &a, std::size_t begin, std::size_t end);
double constraint_error_range_scalar(const double *const *fields, std::size_t n_fields,
                                     std::size_t begin, std::size_t end);

#if defined(MCF_HAVE_AVX2)
const KernelTable &avx2_table() noexcept;
#endif

} // namespace mcf::simd::detail
