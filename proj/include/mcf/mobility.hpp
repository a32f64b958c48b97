#pragma once

// Mobility matrices and their decomposition into harmonically additive parts:
//   m_ij = sum_p m_ij^p,   1/m_ij^p = 1/m_i^p + 1/m_j^p.

#include "mcf/error.hpp"
#include "mcf/pair_matrix.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace mcf {

/// (1/a + 1/b)^-1 with 1/0 = inf, so a zero argument yields a zero pair value.
double harmonic_pair(double a, double b) noexcept;

/// Symmetric nonnegative mobility matrix with zero diagonal, n >= 2.
class MobilitySet {
public:
  /// Throws InvalidArgument naming the first offending entry.
  explicit MobilitySet(PairMatrix m);

  std::size_t n_phases() const noexcept { return m_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const PairMatrix &matrix() const noexcept { return m_; }

  /// True if phase i has no mobile interface at all.
  bool row_is_zero(std::size_t i) const;

private:
  PairMatrix m_;
};

class HarmonicComponent {
public:
  HarmonicComponent() = default;
  explicit HarmonicComponent(std::vector<double> phase_coeffs)
      : coeffs_(std::move(phase_coeffs)) {}

  const std::vector<double> &phase_coeffs() const noexcept { return coeffs_; }
  std::size_t n_phases() const noexcept { return coeffs_.size(); }

  double pair_value(std::size_t i, std::size_t j) const {
    return i == j ? 0.0 : harmonic_pair(coeffs_[i], coeffs_[j]);
  }
  PairMatrix pair_values() const;

  bool is_zero() const noexcept;
  /// True when every pair value vanishes (at most one positive coefficient).
  bool contributes_nothing() const;

private:
  std::vector<double> coeffs_;
};

enum class DecompositionMode { canonical, sparse, explicit_list };

const char *to_string(DecompositionMode mode) noexcept;

class HarmonicDecomposition {
public:
  HarmonicDecomposition() = default;

  /// Components that contribute no pair value are zeroed (kept in place, so P
  /// is unchanged). Throws DimensionMismatch on inconsistent phase counts.
  HarmonicDecomposition(std::size_t n_phases, std::vector<HarmonicComponent> components);

  std::size_t n_phases() const noexcept { return n_; }
  std::size_t n_components() const noexcept { return components_.size(); }
  const std::vector<HarmonicComponent> &components() const noexcept { return components_; }
  const HarmonicComponent &component(std::size_t p) const { return components_.at(p); }

  /// m_k^* = sum_p m_k^p.
  const std::vector<double> &m_star() const noexcept { return m_star_; }

  /// sum_p m_ij^p.
  double reconstructed(std::size_t i, std::size_t j) const;

private:
  std::size_t n_ = 0;
  std::vector<HarmonicComponent> components_;
  std::vector<double> m_star_;
};

/// One component per unordered pair (k, l) with m_a^{kl} = 2 m_kl (d_k(a) + d_l(a)).
HarmonicDecomposition canonical_decomposition(const MobilitySet &mob);

/// Single-component fit via 1/m_i = (1/m_ij + 1/m_ik - 1/m_jk) / 2. Phases whose
/// mobility row is zero get m_i = 0. For n > 3 all triples must agree to 1e-9.
std::variant<HarmonicComponent, NotAdditive> harmonic_fit(const MobilitySet &mob);

/// P = 1 when harmonic_fit succeeds, canonical otherwise.
HarmonicDecomposition sparse_decomposition(const MobilitySet &mob);

struct DecompositionReport {
  double max_abs_error = 0.0;
  /// Most negative coefficient seen, or 0 if none is negative.
  double max_negative_coeff = 0.0;
  std::size_t n_components = 0;
  bool passed = false;
};

/// Passes iff reconstruction error <= 1e-12 max(1, max m_ij) and all
/// coefficients are nonnegative. Throws DimensionMismatch.
DecompositionReport validate(const HarmonicDecomposition &dec, const MobilitySet &mob);

} // namespace mcf
