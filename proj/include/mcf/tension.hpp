#pragma once

#include "mcf/error.hpp"
#include "mcf/pair_matrix.hpp"

#include <variant>
#include <vector>

namespace mcf {

/// Additive surface tensions sigma_ij = sigma_i + sigma_j.
class TensionSet {
public:
  TensionSet(PairMatrix sigma_pair, std::vector<double> sigma_phase)
      : pair_(std::move(sigma_pair)), phase_(std::move(sigma_phase)) {}

  std::size_t n_phases() const noexcept { return phase_.size(); }
  const PairMatrix &sigma_pair() const noexcept { return pair_; }
  const std::vector<double> &sigma_phase() const noexcept { return phase_; }
  double sigma(std::size_t k) const { return phase_.at(k); }

private:
  PairMatrix pair_;
  std::vector<double> phase_;
};

/// sigma_i = (sigma_ij + sigma_ik - sigma_jk) / 2, checked over all triples.
/// For two phases the split is sigma_1 = sigma_2 = sigma_12 / 2.
/// Throws InvalidArgument if the input is not symmetric, nonnegative, zero-diagonal.
std::variant<TensionSet, NotAdditive> split_tensions(const PairMatrix &sigma_pair);

/// Homogeneous tensions sigma_ij = value.
PairMatrix uniform_pairs(std::size_t n, double value);

} // namespace mcf
