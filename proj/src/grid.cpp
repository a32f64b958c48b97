#include "mcf/grid.hpp"

#include "mcf/simd/kernels.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <string>

namespace mcf {

namespace {

// The FFTW planner is not thread safe.
std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

} // namespace

SpectralGrid::SpectralGrid(std::vector<int> sizes, std::vector<double> lengths,
                           std::vector<double> origin)
    : dim_(static_cast<int>(sizes.size())) {
  if (dim_ < 1 || dim_ > kMaxDim)
    throw InvalidArgument("grid dimension must be 1, 2 or 3");
  if (lengths.size() != sizes.size())
    throw DimensionMismatch("grid sizes and lengths differ in dimension");
  if (!origin.empty() && origin.size() != sizes.size())
    throw DimensionMismatch("grid origin has the wrong dimension");
  nodes_ = 1;
  for (int a = 0; a < dim_; ++a) {
    if (sizes[a] < 2 || sizes[a] % 2 != 0)
      throw InvalidArgument("grid size along axis " + std::to_string(a) +
                            " must be even and >= 2");
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
      throw InvalidArgument("grid length along axis " + std::to_string(a) + " must be positive");
    sizes_[a] = sizes[a];
    lengths_[a] = lengths[a];
    origin_[a] = origin.empty() ? 0.0 : origin[a];
    nodes_ *= static_cast<std::size_t>(sizes[a]);
  }
  spectrum_nodes_ = nodes_ / static_cast<std::size_t>(sizes_[dim_ - 1]) *
                    static_cast<std::size_t>(sizes_[dim_ - 1] / 2 + 1);
}

double SpectralGrid::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a)
    v *= lengths_[a] / sizes_[a];
  return v;
}

double SpectralGrid::domain_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a)
    v *= lengths_[a];
  return v;
}

std::size_t SpectralGrid::flat_index(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    int i = idx[a] % sizes_[a];
    if (i < 0)
      i += sizes_[a];
    flat = flat * static_cast<std::size_t>(sizes_[a]) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::array<int, SpectralGrid::kMaxDim> SpectralGrid::multi_index(std::size_t flat) const {
  std::array<int, kMaxDim> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(sizes_[a]));
    flat /= static_cast<std::size_t>(sizes_[a]);
  }
  return idx;
}

std::array<double, SpectralGrid::kMaxDim> SpectralGrid::node(std::size_t flat) const {
  const auto idx = multi_index(flat);
  std::array<double, kMaxDim> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a)
    x[a] = origin_[a] + idx[a] * spacing(a);
  return x;
}

int SpectralGrid::signed_frequency(int axis, int j) const {
  const int k = sizes_.at(axis);
  return j < k / 2 ? j : j - k;
}

double SpectralGrid::laplacian_symbol(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dim_)
    throw FrequencyOutOfRange("frequency vector has " + std::to_string(k.size()) +
                              " components, grid has dimension " + std::to_string(dim_));
  double xi2 = 0.0;
  for (int a = 0; a < dim_; ++a) {
    if (k[a] < -sizes_[a] / 2 || k[a] > sizes_[a] / 2 - 1)
      throw FrequencyOutOfRange("frequency " + std::to_string(k[a]) + " outside [" +
                                std::to_string(-sizes_[a] / 2) + ", " +
                                std::to_string(sizes_[a] / 2 - 1) + "] on axis " +
                                std::to_string(a));
    const double xi = k[a] / lengths_[a];
    xi2 += xi * xi;
  }
  return -kFourPiSq * xi2;
}

std::vector<double> SpectralGrid::negative_laplacian_half_spectrum() const {
  std::vector<double> out(spectrum_nodes_);
  const int last = dim_ - 1;
  const int half_last = sizes_[last] / 2 + 1;
  std::size_t pos = 0;
  std::array<int, kMaxDim> idx{0, 0, 0};
  std::array<int, kMaxDim> extent{1, 1, 1};
  for (int a = 0; a < dim_; ++a)
    extent[a] = a == last ? half_last : sizes_[a];
  for (idx[0] = 0; idx[0] < extent[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < extent[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < extent[2]; ++idx[2]) {
        double xi2 = 0.0;
        for (int a = 0; a < dim_; ++a) {
          const double xi = signed_frequency(a, idx[a]) / lengths_[a];
          xi2 += xi * xi;
        }
        out[pos++] = kFourPiSq * xi2;
      }
  return out;
}

bool SpectralGrid::operator==(const SpectralGrid &o) const noexcept {
  return dim_ == o.dim_ && sizes_ == o.sizes_ && lengths_ == o.lengths_ && origin_ == o.origin_;
}

ScalarField::ScalarField(const SpectralGrid &grid, double fill)
    : grid_(grid), values_(grid.node_count(), fill) {}

ScalarField::ScalarField(const SpectralGrid &grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.node_count())
    throw SizeMismatch("field has " + std::to_string(values_.size()) + " values, grid has " +
                       std::to_string(grid_.node_count()) + " nodes");
}

bool ScalarField::all_finite() const noexcept {
  return simd::active_kernels().all_finite(values_.data(), values_.size());
}

double ScalarField::mean() const noexcept {
  double s = 0.0;
  for (double v : values_)
    s += v;
  return s / static_cast<double>(values_.size());
}

Spectrum::Spectrum(const SpectralGrid &grid) : grid_(grid), half_(grid.spectrum_count()) {}

Complex Spectrum::coefficient(std::span<const int> k) const {
  const int d = grid_.dim();
  // Validates the box.
  (void)grid_.laplacian_symbol(k);
  std::array<int, SpectralGrid::kMaxDim> idx{0, 0, 0};
  for (int a = 0; a < d; ++a)
    idx[a] = k[a];
  bool conjugate = false;
  const int last = d - 1;
  const int kl = grid_.size(last);
  int jl = idx[last] < 0 ? idx[last] + kl : idx[last];
  if (jl > kl / 2) {
    for (int a = 0; a < d; ++a)
      idx[a] = -idx[a];
    conjugate = true;
    jl = kl - jl;
  }
  std::size_t flat = 0;
  for (int a = 0; a < last; ++a) {
    int j = idx[a] % grid_.size(a);
    if (j < 0)
      j += grid_.size(a);
    flat = flat * static_cast<std::size_t>(grid_.size(a)) + static_cast<std::size_t>(j);
  }
  flat = flat * static_cast<std::size_t>(kl / 2 + 1) + static_cast<std::size_t>(jl);
  const Complex c = half_[flat];
  return conjugate ? std::conj(c) : c;
}

struct FourierTransform::Impl {
  SpectralGrid grid;
  double *real = nullptr;
  fftw_complex *spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Impl(const SpectralGrid &g) : grid(g) {
    real = fftw_alloc_real(g.node_count());
    spec = fftw_alloc_complex(g.spectrum_count());
    if (!real || !spec)
      throw Error("FFT buffer allocation failed");
    std::array<int, SpectralGrid::kMaxDim> n{};
    for (int a = 0; a < g.dim(); ++a)
      n[a] = g.size(a);
    std::lock_guard lock(planner_mutex());
    fwd = fftw_plan_dft_r2c(g.dim(), n.data(), real, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r(g.dim(), n.data(), spec, real, FFTW_ESTIMATE);
    if (!fwd || !inv)
      throw Error("FFTW planning failed");
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (fwd)
      fftw_destroy_plan(fwd);
    if (inv)
      fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spec);
  }
};

FourierTransform::FourierTransform(const SpectralGrid &grid)
    : impl_(std::make_unique<Impl>(grid)) {}
FourierTransform::~FourierTransform() = default;
FourierTransform::FourierTransform(FourierTransform &&) noexcept = default;
FourierTransform &FourierTransform::operator=(FourierTransform &&) noexcept = default;

const SpectralGrid &FourierTransform::grid() const noexcept { return impl_->grid; }

std::span<double> FourierTransform::real_buffer() noexcept {
  return {impl_->real, impl_->grid.node_count()};
}

std::span<Complex> FourierTransform::spectrum_buffer() noexcept {
  return {reinterpret_cast<Complex *>(impl_->spec), impl_->grid.spectrum_count()};
}

void FourierTransform::execute_forward() { fftw_execute(impl_->fwd); }
void FourierTransform::execute_inverse() { fftw_execute(impl_->inv); }

Spectrum FourierTransform::forward(const ScalarField &field) {
  if (!(field.grid() == impl_->grid))
    throw SizeMismatch("field grid does not match the transform grid");
  std::memcpy(impl_->real, field.data(), field.size() * sizeof(double));
  execute_forward();
  Spectrum out(impl_->grid);
  const double scale = 1.0 / static_cast<double>(impl_->grid.node_count());
  auto src = spectrum_buffer();
  auto dst = out.half();
  for (std::size_t j = 0; j < dst.size(); ++j)
    dst[j] = src[j] * scale;
  return out;
}

ScalarField FourierTransform::inverse(const Spectrum &spectrum) {
  if (!(spectrum.grid() == impl_->grid))
    throw SizeMismatch("spectrum grid does not match the transform grid");
  auto src = spectrum.half();
  std::copy(src.begin(), src.end(), spectrum_buffer().begin());
  execute_inverse();
  ScalarField out(impl_->grid);
  std::memcpy(out.data(), impl_->real, out.size() * sizeof(double));
  return out;
}

ScalarField apply_helmholtz_inverse(const ScalarField &field, double a, double c) {
  if (!(a >= 0.0) || !(c >= 0.0))
    throw InvalidArgument("Helmholtz coefficients must be nonnegative");
  if (a == 0.0)
    return field;
  const auto &grid = field.grid();
  const auto &k = simd::active_kernels();
  FourierTransform fft(grid);
  const auto symbol = grid.negative_laplacian_half_spectrum();
  std::vector<double> factor(symbol.size());
  k.helmholtz_factors(symbol.data(), factor.data(), symbol.size(), a, c,
                      1.0 / static_cast<double>(grid.node_count()));
  std::memcpy(fft.real_buffer().data(), field.data(), field.size() * sizeof(double));
  fft.execute_forward();
  k.scale_spectrum(fft.spectrum_buffer().data(), factor.data(), factor.size());
  fft.execute_inverse();
  ScalarField out(grid);
  std::memcpy(out.data(), fft.real_buffer().data(), out.size() * sizeof(double));
  return out;
}

} // namespace mcf
