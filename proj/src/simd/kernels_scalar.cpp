#include "kernels_impl.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mcf::simd::detail {

void allen_cahn_explicit_scalar(const double *u, double *out, std::size_t n, double coeff,
                                double alpha) {
  for (std::size_t j = 0; j < n; ++j)
    out[j] = allen_cahn_explicit_one(u[j], coeff, alpha);
}

void helmholtz_factors_scalar(const double *symbol, double *factor, std::size_t n, double a,
                              double c, double scale) {
  for (std::size_t j = 0; j < n; ++j)
    factor[j] = scale / (1.0 + a * (symbol[j] + c));
}

void scale_spectrum_scalar(std::complex<double> *spec, const double *factor, std::size_t n) {
  auto *d = reinterpret_cast<double *>(spec);
  for (std::size_t j = 0; j < n; ++j) {
    d[2 * j] *= factor[j];
    d[2 * j + 1] *= factor[j];
  }
}

void project_range_scalar(const ProjectionArgs &a, std::size_t begin, std::size_t end) {
  std::vector<double> w(a.n_phases), rate(a.n_phases), lam(a.n_phases);
  for (std::size_t x = begin; x < end; ++x) {
    for (std::size_t k = 0; k < a.n_phases; ++k) {
      const double u = a.u_half[k][x];
      w[k] = std::abs(u * (1.0 - u)) + a.beta;
      rate[k] = (u - a.u_prev[k][x]) * a.inv_dt_mstar[k];
      lam[k] = 0.0;
    }
    for (std::size_t p = 0; p < a.n_components; ++p) {
      double num = 0.0;
      double den = 0.0;
      for (std::uint32_t e = a.offsets[p]; e < a.offsets[p + 1]; ++e) {
        num = num + a.coeff[e] * rate[a.phase[e]];
        den = den + a.coeff[e] * w[a.phase[e]];
      }
      const double lp = -num / den;
      for (std::uint32_t e = a.offsets[p]; e < a.offsets[p + 1]; ++e)
        lam[a.phase[e]] = lam[a.phase[e]] + a.coeff[e] * lp;
    }
    for (std::size_t k = 0; k < a.n_phases; ++k)
      a.out[k][x] = a.u_half[k][x] + (a.dt * lam[k]) * w[k];
  }
}

void project_scalar(const ProjectionArgs &a) { project_range_scalar(a, 0, a.n_nodes); }

double constraint_error_range_scalar(const double *const *fields, std::size_t n_fields,
                                     std::size_t begin, std::size_t end) {
  double worst = 0.0;
  for (std::size_t x = begin; x < end; ++x) {
    double s = 0.0;
    for (std::size_t k = 0; k < n_fields; ++k)
      s = s + fields[k][x];
    worst = std::max(worst, std::abs(1.0 - s));
  }
  return worst;
}

double constraint_error_scalar(const double *const *fields, std::size_t n_fields,
                               std::size_t n) {
  return constraint_error_range_scalar(fields, n_fields, 0, n);
}

double double_well_sum_scalar(const double *u, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    s += double_well_one(u[j]);
  return s;
}

bool all_finite_scalar(const double *u, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j)
    if (!std::isfinite(u[j]))
      return false;
  return true;
}

} // namespace mcf::simd::detail

namespace mcf::simd {

const KernelTable &scalar_kernels() noexcept {
  static const KernelTable table{
      Isa::scalar,
      detail::allen_cahn_explicit_scalar,
      detail::helmholtz_factors_scalar,
      detail::scale_spectrum_scalar,
      detail::project_scalar,
      detail::constraint_error_scalar,
      detail::double_well_sum_scalar,
      detail::all_finite_scalar,
  };
  return table;
}

} // namespace mcf::simd
