#include "mcf/pair_matrix.hpp"

#include <algorithm>

namespace mcf {

double PairMatrix::max_off_diagonal() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j)
        best = std::max(best, (*this)(i, j));
  return best;
}

} // namespace mcf
