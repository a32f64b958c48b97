#include "mcf/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mcf {

namespace {

constexpr double kFitTolerance = 1e-9;
constexpr double kValidateTolerance = 1e-12;

std::string pair_name(std::size_t i, std::size_t j) {
  return "m_" + std::to_string(i + 1) + std::to_string(j + 1);
}

bool agree(double a, double b) {
  return std::abs(a - b) <= kFitTolerance * std::max(std::abs(a), std::abs(b));
}

} // namespace

double harmonic_pair(double a, double b) noexcept {
  if (a == 0.0 || b == 0.0)
    return 0.0;
  if (a == b)
    return 0.5 * a;
  return a * b / (a + b);
}

MobilitySet::MobilitySet(PairMatrix m) : m_(std::move(m)) {
  const std::size_t n = m_.size();
  if (n < 2)
    throw InvalidArgument("mobility matrix needs at least two phases");
  for (std::size_t i = 0; i < n; ++i) {
    if (m_(i, i) != 0.0)
      throw InvalidArgument(pair_name(i, i) + " must be zero (diagonal)");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = m_(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw InvalidArgument(pair_name(i, j) + " = " + std::to_string(v) +
                              " is not a finite nonnegative mobility");
      if (m_(j, i) != v)
        throw InvalidArgument(pair_name(i, j) + " and " + pair_name(j, i) + " differ");
    }
  }
}

bool MobilitySet::row_is_zero(std::size_t i) const {
  for (std::size_t j = 0; j < n_phases(); ++j)
    if (j != i && m_(i, j) != 0.0)
      return false;
  return true;
}

PairMatrix HarmonicComponent::pair_values() const {
  PairMatrix out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = i + 1; j < coeffs_.size(); ++j)
      out.set_pair(i, j, pair_value(i, j));
  return out;
}

bool HarmonicComponent::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

bool HarmonicComponent::contributes_nothing() const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = i + 1; j < coeffs_.size(); ++j)
      if (pair_value(i, j) != 0.0)
        return false;
  return true;
}

const char *to_string(DecompositionMode mode) noexcept {
  switch (mode) {
  case DecompositionMode::canonical:
    return "canonical";
  case DecompositionMode::sparse:
    return "sparse";
  case DecompositionMode::explicit_list:
    return "explicit";
  }
  return "?";
}

HarmonicDecomposition::HarmonicDecomposition(std::size_t n_phases,
                                             std::vector<HarmonicComponent> components)
    : n_(n_phases), components_(std::move(components)), m_star_(n_phases, 0.0) {
  for (auto &c : components_) {
    if (c.n_phases() != n_)
      throw DimensionMismatch("component has " + std::to_string(c.n_phases()) +
                              " coefficients, expected " + std::to_string(n_));
    const auto &k = c.phase_coeffs();
    const bool nonnegative = std::all_of(k.begin(), k.end(), [](double v) { return v >= 0.0; });
    // A lone positive coefficient has no partner and moves nothing.
    if (nonnegative && !c.is_zero() && c.contributes_nothing())
      c = HarmonicComponent(std::vector<double>(n_, 0.0));
  }
  for (const auto &c : components_)
    for (std::size_t k = 0; k < n_; ++k)
      m_star_[k] += c.phase_coeffs()[k];
}

double HarmonicDecomposition::reconstructed(std::size_t i, std::size_t j) const {
  double sum = 0.0;
  for (const auto &c : components_)
    sum += c.pair_value(i, j);
  return sum;
}

HarmonicDecomposition canonical_decomposition(const MobilitySet &mob) {
  const std::size_t n = mob.n_phases();
  std::vector<HarmonicComponent> components;
  components.reserve(n * (n - 1) / 2);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      std::vector<double> coeffs(n, 0.0);
      coeffs[k] = 2.0 * mob(k, l);
      coeffs[l] = 2.0 * mob(k, l);
      components.emplace_back(std::move(coeffs));
    }
  }
  return HarmonicDecomposition(n, std::move(components));
}

std::variant<HarmonicComponent, NotAdditive> harmonic_fit(const MobilitySet &mob) {
  const std::size_t n = mob.n_phases();
  if (n < 3)
    return NotAdditive{"harmonic fit needs at least three phases"};

  // Phases with an all-zero row take m_i = 0; the rest must be pairwise mobile.
  std::vector<std::size_t> mobile;
  for (std::size_t i = 0; i < n; ++i)
    if (!mob.row_is_zero(i))
      mobile.push_back(i);

  for (std::size_t a = 0; a < mobile.size(); ++a)
    for (std::size_t b = a + 1; b < mobile.size(); ++b)
      if (mob(mobile[a], mobile[b]) == 0.0)
        return NotAdditive{pair_name(mobile[a], mobile[b]) +
                           " = 0 between phases that are otherwise mobile"};

  std::vector<double> coeffs(n, 0.0);
  if (mobile.size() == 2) {
    // Under-determined; split symmetrically.
    const double m = mob(mobile[0], mobile[1]);
    coeffs[mobile[0]] = 2.0 * m;
    coeffs[mobile[1]] = 2.0 * m;
  } else if (mobile.size() >= 3) {
    for (std::size_t i : mobile) {
      bool have_first = false;
      double first = 0.0;
      for (std::size_t a = 0; a < mobile.size(); ++a) {
        const std::size_t j = mobile[a];
        if (j == i)
          continue;
        for (std::size_t b = a + 1; b < mobile.size(); ++b) {
          const std::size_t k = mobile[b];
          if (k == i)
            continue;
          const double inv = 0.5 * (1.0 / mob(i, j) + 1.0 / mob(i, k) - 1.0 / mob(j, k));
          if (!have_first) {
            first = inv;
            have_first = true;
            if (inv <= 0.0) {
              std::ostringstream os;
              os << "1/m_" << i + 1 << " = " << inv << (inv < 0.0 ? " < 0" : " (infinite m)")
                 << " from " << pair_name(i, j) << ", " << pair_name(i, k) << ", "
                 << pair_name(j, k);
              return NotAdditive{os.str()};
            }
          } else if (!agree(first, inv)) {
            std::ostringstream os;
            os << "triples disagree for phase " << i + 1 << ": 1/m_" << i + 1 << " = " << first
               << " vs " << inv << " (via phases " << j + 1 << ", " << k + 1 << ")";
            return NotAdditive{os.str()};
          }
        }
      }
      coeffs[i] = 1.0 / first;
    }
  }

  HarmonicComponent component(std::move(coeffs));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double target = mob(i, j);
      const double got = component.pair_value(i, j);
      if (std::abs(got - target) > kFitTolerance * target) {
        std::ostringstream os;
        os << "reconstructed " << pair_name(i, j) << " = " << got << " differs from " << target;
        return NotAdditive{os.str()};
      }
    }
  }
  return component;
}

HarmonicDecomposition sparse_decomposition(const MobilitySet &mob) {
  auto fit = harmonic_fit(mob);
  if (auto *c = std::get_if<HarmonicComponent>(&fit))
    return HarmonicDecomposition(mob.n_phases(), {std::move(*c)});
  return canonical_decomposition(mob);
}

DecompositionReport validate(const HarmonicDecomposition &dec, const MobilitySet &mob) {
  const std::size_t n = mob.n_phases();
  if (dec.n_phases() != n)
    throw DimensionMismatch("decomposition has " + std::to_string(dec.n_phases()) +
                            " phases, mobility matrix has " + std::to_string(n));
  DecompositionReport report;
  report.n_components = dec.n_components();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      report.max_abs_error =
          std::max(report.max_abs_error, std::abs(dec.reconstructed(i, j) - mob(i, j)));
  for (const auto &c : dec.components())
    for (double v : c.phase_coeffs())
      report.max_negative_coeff = std::min(report.max_negative_coeff, v);
  const double tol = kValidateTolerance * std::max(1.0, mob.matrix().max_off_diagonal());
  report.passed = report.max_abs_error <= tol && report.max_negative_coeff >= 0.0;
  return report;
}

} // namespace mcf
