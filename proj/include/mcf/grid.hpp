#pragma once

// Periodic rectangular grids, scalar fields on them, and Fourier transforms.
//
// Normalization: forward() returns Fourier-series coefficients
//   c_k = (1 / prod K_i) sum_x u(x) exp(-2 i pi xi_k . (x - origin)),
// so a constant field c has c_0 = c and c_0 is always the grid mean;
// inverse() is the unscaled synthesis u(x) = sum_k c_k exp(2 i pi xi_k . x).
// Spectra are stored as the real-to-complex half spectrum (last axis K/2 + 1).

#include "mcf/error.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace mcf {

using Complex = std::complex<double>;

class SpectralGrid {
public:
  static constexpr int kMaxDim = 3;

  /// Sizes must be even and >= 2; lengths positive. Origin defaults to 0.
  SpectralGrid(std::vector<int> sizes, std::vector<double> lengths,
               std::vector<double> origin = {});

  int dim() const noexcept { return dim_; }
  int size(int axis) const { return sizes_.at(axis); }
  double length(int axis) const { return lengths_.at(axis); }
  double origin(int axis) const { return origin_.at(axis); }
  double spacing(int axis) const { return lengths_.at(axis) / sizes_.at(axis); }

  std::size_t node_count() const noexcept { return nodes_; }
  /// Number of stored half-spectrum coefficients.
  std::size_t spectrum_count() const noexcept { return spectrum_nodes_; }
  double cell_volume() const noexcept;
  double domain_volume() const noexcept;

  /// Row-major flat index, axis 0 slowest.
  std::size_t flat_index(std::span<const int> idx) const;
  std::array<int, kMaxDim> multi_index(std::size_t flat) const;
  std::array<double, kMaxDim> node(std::size_t flat) const;

  /// Signed frequency of storage index j along an axis, in [-K/2, K/2 - 1].
  int signed_frequency(int axis, int j) const;

  /// -4 pi^2 |xi_k|^2 with xi_k = (k_1 / L_1, ..., k_d / L_d).
  /// Throws FrequencyOutOfRange outside the box [-K/2, K/2 - 1]^d.
  double laplacian_symbol(std::span<const int> k) const;

  /// 4 pi^2 |xi_k|^2 for every half-spectrum entry, in storage order.
  std::vector<double> negative_laplacian_half_spectrum() const;

  bool operator==(const SpectralGrid &other) const noexcept;

private:
  int dim_;
  std::array<int, kMaxDim> sizes_{1, 1, 1};
  std::array<double, kMaxDim> lengths_{1.0, 1.0, 1.0};
  std::array<double, kMaxDim> origin_{0.0, 0.0, 0.0};
  std::size_t nodes_ = 1;
  std::size_t spectrum_nodes_ = 1;
};

class ScalarField {
public:
  explicit ScalarField(const SpectralGrid &grid, double fill = 0.0);
  /// Throws SizeMismatch if values.size() != node count.
  ScalarField(const SpectralGrid &grid, std::vector<double> values);

  const SpectralGrid &grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double *data() noexcept { return values_.data(); }
  const double *data() const noexcept { return values_.data(); }
  double &operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool all_finite() const noexcept;
  double mean() const noexcept;

  bool operator==(const ScalarField &) const = default;

private:
  SpectralGrid grid_;
  std::vector<double> values_;
};

class Spectrum {
public:
  explicit Spectrum(const SpectralGrid &grid);

  const SpectralGrid &grid() const noexcept { return grid_; }
  std::span<Complex> half() noexcept { return half_; }
  std::span<const Complex> half() const noexcept { return half_; }

  /// Full-spectrum access for any signed frequency in the box; the missing
  /// half comes from Hermitian symmetry c_{-k} = conj(c_k).
  Complex coefficient(std::span<const int> k) const;

private:
  SpectralGrid grid_;
  std::vector<Complex> half_;
};

/// Owns FFTW plans and aligned work buffers for one grid shape.
/// Plans use FFTW_ESTIMATE, so results are reproducible run to run.
class FourierTransform {
public:
  explicit FourierTransform(const SpectralGrid &grid);
  ~FourierTransform();
  FourierTransform(FourierTransform &&) noexcept;
  FourierTransform &operator=(FourierTransform &&) noexcept;
  FourierTransform(const FourierTransform &) = delete;
  FourierTransform &operator=(const FourierTransform &) = delete;

  const SpectralGrid &grid() const noexcept;

  Spectrum forward(const ScalarField &field);
  ScalarField inverse(const Spectrum &spectrum);

  // Unnormalized in-buffer interface: execute_forward maps real_buffer() to
  // spectrum_buffer(); execute_inverse maps back and overwrites the spectrum.
  std::span<double> real_buffer() noexcept;
  std::span<Complex> spectrum_buffer() noexcept;
  void execute_forward();
  void execute_inverse();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Periodic solution v of (I - a (Lap - c I)) v = f, solved per Fourier mode.
/// a = 0 returns f unchanged. Throws InvalidArgument for negative a or c.
ScalarField apply_helmholtz_inverse(const ScalarField &field, double a, double c);

} // namespace mcf
