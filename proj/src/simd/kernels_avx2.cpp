// Compiled with -mavx2 only (no -mfma) so no multiply-add gets contracted.

#include "kernels_impl.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace mcf::simd::detail {

namespace {

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void allen_cahn_explicit_avx2(const double *u, double *out, std::size_t n, double coeff,
                              double alpha) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d vc = _mm256_set1_pd(coeff);
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d x = _mm256_loadu_pd(u + j);
    const __m256d t = _mm256_mul_pd(x, _mm256_sub_pd(one, x));
    const __m256d wp = _mm256_mul_pd(t, _mm256_sub_pd(one, _mm256_mul_pd(two, x)));
    const __m256d r = _mm256_sub_pd(wp, _mm256_mul_pd(va, x));
    _mm256_storeu_pd(out + j, _mm256_sub_pd(x, _mm256_mul_pd(vc, r)));
  }
  for (; j < n; ++j)
    out[j] = allen_cahn_explicit_one(u[j], coeff, alpha);
}

void helmholtz_factors_avx2(const double *symbol, double *factor, std::size_t n, double a,
                            double c, double scale) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d s = _mm256_loadu_pd(symbol + j);
    const __m256d d = _mm256_add_pd(one, _mm256_mul_pd(va, _mm256_add_pd(s, vc)));
    _mm256_storeu_pd(factor + j, _mm256_div_pd(vs, d));
  }
  for (; j < n; ++j)
    factor[j] = scale / (1.0 + a * (symbol[j] + c));
}

void scale_spectrum_avx2(std::complex<double> *spec, const double *factor, std::size_t n) {
  auto *d = reinterpret_cast<double *>(spec);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m128d f = _mm_loadu_pd(factor + j);
    // (f0, f0, f1, f1)
    const __m256d ff = _mm256_permute4x64_pd(_mm256_castpd128_pd256(f), 0x50);
    _mm256_storeu_pd(d + 2 * j, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * j), ff));
  }
  for (; j < n; ++j) {
    d[2 * j] *= factor[j];
    d[2 * j + 1] *= factor[j];
  }
}

struct Lanes {
  __m256d w, rate, lam;
};

void project_avx2(const ProjectionArgs &a) {
  const std::size_t np = a.n_phases;
  std::vector<Lanes> lanes(np);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d beta = _mm256_set1_pd(a.beta);
  const __m256d dt = _mm256_set1_pd(a.dt);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t x = 0;
  for (; x + 4 <= a.n_nodes; x += 4) {
    for (std::size_t k = 0; k < np; ++k) {
      const __m256d u = _mm256_loadu_pd(a.u_half[k] + x);
      const __m256d up = _mm256_loadu_pd(a.u_prev[k] + x);
      lanes[k].w = _mm256_add_pd(abs_pd(_mm256_mul_pd(u, _mm256_sub_pd(one, u))), beta);
      lanes[k].rate = _mm256_mul_pd(_mm256_sub_pd(u, up), _mm256_set1_pd(a.inv_dt_mstar[k]));
      lanes[k].lam = zero;
    }
    for (std::size_t p = 0; p < a.n_components; ++p) {
      __m256d num = zero;
      __m256d den = zero;
      for (std::uint32_t e = a.offsets[p]; e < a.offsets[p + 1]; ++e) {
        const __m256d c = _mm256_set1_pd(a.coeff[e]);
        num = _mm256_add_pd(num, _mm256_mul_pd(c, lanes[a.phase[e]].rate));
        den = _mm256_add_pd(den, _mm256_mul_pd(c, lanes[a.phase[e]].w));
      }
      const __m256d lp = _mm256_xor_pd(_mm256_div_pd(num, den), _mm256_set1_pd(-0.0));
      for (std::uint32_t e = a.offsets[p]; e < a.offsets[p + 1]; ++e) {
        const __m256d c = _mm256_set1_pd(a.coeff[e]);
        lanes[a.phase[e]].lam = _mm256_add_pd(lanes[a.phase[e]].lam, _mm256_mul_pd(c, lp));
      }
    }
    for (std::size_t k = 0; k < np; ++k) {
      const __m256d u = _mm256_loadu_pd(a.u_half[k] + x);
      const __m256d step = _mm256_mul_pd(_mm256_mul_pd(dt, lanes[k].lam), lanes[k].w);
      _mm256_storeu_pd(a.out[k] + x, _mm256_add_pd(u, step));
    }
  }
  project_range_scalar(a, x, a.n_nodes);
}

double constraint_error_avx2(const double *const *fields, std::size_t n_fields, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d worst = _mm256_setzero_pd();
  std::size_t x = 0;
  for (; x + 4 <= n; x += 4) {
    __m256d s = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n_fields; ++k)
      s = _mm256_add_pd(s, _mm256_loadu_pd(fields[k] + x));
    worst = _mm256_max_pd(worst, abs_pd(_mm256_sub_pd(one, s)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, worst);
  double out = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  return std::max(out, constraint_error_range_scalar(fields, n_fields, x, n));
}

double double_well_sum_avx2(const double *u, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d x = _mm256_loadu_pd(u + j);
    const __m256d t = _mm256_mul_pd(x, _mm256_sub_pd(one, x));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(half, _mm256_mul_pd(t, t)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; j < n; ++j)
    s += double_well_one(u[j]);
  return s;
}

bool all_finite_avx2(const double *u, std::size_t n) {
  // x - x is 0 for finite x and NaN otherwise.
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d x = _mm256_loadu_pd(u + j);
    acc = _mm256_add_pd(acc, _mm256_sub_pd(x, x));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (double l : lanes)
    if (l != 0.0)
      return false;
  for (; j < n; ++j)
    if (!std::isfinite(u[j]))
      return false;
  return true;
}

} // namespace

const KernelTable &avx2_table() noexcept {
  static const KernelTable table{
      Isa::avx2,
      allen_cahn_explicit_avx2,
      helmholtz_factors_avx2,
      scale_spectrum_avx2,
      project_avx2,
      constraint_error_avx2,
      double_well_sum_avx2,
      all_finite_avx2,
  };
  return table;
}

} // namespace mcf::simd::detail
