#pragma once

#include <cstddef>
#include <vector>

namespace mcf {

/// Dense n x n matrix of pairwise coefficients (mobilities, tensions).
class PairMatrix {
public:
  PairMatrix() = default;
  explicit PairMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double &operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

  /// Sets both (i, j) and (j, i).
  void set_pair(std::size_t i, std::size_t j, double v) {
    (*this)(i, j) = v;
    (*this)(j, i) = v;
  }

  /// Largest off-diagonal entry, 0 for n < 2.
  double max_off_diagonal() const;

  bool operator==(const PairMatrix &) const = default;

private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

} // namespace mcf
