#include "mcf/tension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace mcf {

namespace {

constexpr double kTolerance = 1e-9;

std::string sigma_name(std::size_t i, std::size_t j) {
  return "sigma_" + std::to_string(i + 1) + std::to_string(j + 1);
}

} // namespace

PairMatrix uniform_pairs(std::size_t n, double value) {
  PairMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      m.set_pair(i, j, value);
  return m;
}

std::variant<TensionSet, NotAdditive> split_tensions(const PairMatrix &s) {
  const std::size_t n = s.size();
  if (n < 2)
    throw InvalidArgument("tension matrix needs at least two phases");
  for (std::size_t i = 0; i < n; ++i) {
    if (s(i, i) != 0.0)
      throw InvalidArgument(sigma_name(i, i) + " must be zero (diagonal)");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!std::isfinite(s(i, j)) || s(i, j) < 0.0)
        throw InvalidArgument(sigma_name(i, j) + " is not a finite nonnegative tension");
      if (s(i, j) != s(j, i))
        throw InvalidArgument(sigma_name(i, j) + " and " + sigma_name(j, i) + " differ");
    }
  }

  std::vector<double> phase(n, 0.0);
  if (n == 2) {
    phase[0] = phase[1] = 0.5 * s(0, 1);
    return TensionSet(s, std::move(phase));
  }

  const double scale = std::max(s.max_off_diagonal(), 1e-300);
  for (std::size_t i = 0; i < n; ++i) {
    bool have_first = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i)
        continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (k == i)
          continue;
        const double v = 0.5 * (s(i, j) + s(i, k) - s(j, k));
        if (!have_first) {
          phase[i] = v;
          have_first = true;
        } else if (std::abs(v - phase[i]) > kTolerance * scale) {
          std::ostringstream os;
          os << "triples disagree for sigma_" << i + 1 << ": " << phase[i] << " vs " << v;
          return NotAdditive{os.str()};
        }
      }
    }
    if (phase[i] < 0.0) {
      std::ostringstream os;
      os << "sigma_" << i + 1 << " = " << phase[i] << " < 0 (triangle inequality violated)";
      return NotAdditive{os.str()};
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(phase[i] + phase[j] - s(i, j)) > kTolerance * scale) {
        std::ostringstream os;
        os << sigma_name(i, j) << " = " << s(i, j) << " is not sigma_" << i + 1 << " + sigma_"
           << j + 1 << " = " << phase[i] + phase[j];
        return NotAdditive{os.str()};
      }
    }
  }
  return TensionSet(s, std::move(phase));
}

} // namespace mcf
