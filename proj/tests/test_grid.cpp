#include "mcf/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mcf;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField random_field(const SpectralGrid &g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f(g);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = u(rng);
  return f;
}

// Direct O(N^2) Fourier-series coefficient for signed frequency k.
Complex dft_coefficient(const ScalarField &f, std::span<const int> k) {
  const auto &g = f.grid();
  Complex sum = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    const auto idx = g.multi_index(x);
    double phase = 0.0;
    for (int a = 0; a < g.dim(); ++a)
      phase += double(k[a]) * idx[a] / g.size(a);
    sum += f[x] * std::polar(1.0, -2.0 * kPi * phase);
  }
  return sum / double(g.node_count());
}

} // namespace

TEST(Grid, ConstructionChecks) {
  EXPECT_THROW(SpectralGrid({3, 4}, {1, 1}), InvalidArgument);
  EXPECT_THROW(SpectralGrid({0, 4}, {1, 1}), InvalidArgument);
  EXPECT_THROW(SpectralGrid({4, 4}, {1, -1}), InvalidArgument);
  EXPECT_THROW(SpectralGrid({4, 4}, {1}), DimensionMismatch);
  EXPECT_THROW(SpectralGrid({2, 2, 2, 2}, {1, 1, 1, 1}), InvalidArgument);
  const SpectralGrid g({8, 4}, {2.0, 1.0}, {-1.0, -0.5});
  EXPECT_EQ(g.node_count(), 32u);
  EXPECT_EQ(g.spectrum_count(), 8u * 3u);
  EXPECT_DOUBLE_EQ(g.spacing(0), 0.25);
  EXPECT_DOUBLE_EQ(g.cell_volume(), 0.0625);
  EXPECT_DOUBLE_EQ(g.domain_volume(), 2.0);
}

TEST(Grid, IndexingWrapsPeriodically) {
  const SpectralGrid g({4, 6, 8}, {1, 1, 1});
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto idx = g.multi_index(i);
    ASSERT_EQ(g.flat_index(std::span<const int>(idx.data(), 3)), i);
  }
  const int a[] = {-1, 6, 9};
  const int b[] = {3, 0, 1};
  EXPECT_EQ(g.flat_index(a), g.flat_index(b));
  const int c[] = {1, 2, 3};
  EXPECT_EQ(g.flat_index(c), std::size_t(1 * 48 + 2 * 8 + 3));
  const SpectralGrid h({4, 4}, {1, 2}, {-0.5, -1});
  const auto x = h.node(h.flat_index(std::vector<int>{1, 3}));
  EXPECT_DOUBLE_EQ(x[0], -0.25);
  EXPECT_DOUBLE_EQ(x[1], 0.5);
}

TEST(Grid, LaplacianSymbol) {
  const SpectralGrid g({8, 8}, {1, 1});
  EXPECT_EQ(g.laplacian_symbol(std::vector<int>{0, 0}), 0.0);
  EXPECT_NEAR(g.laplacian_symbol(std::vector<int>{1, 0}), -4 * kPi * kPi, 1e-12);
  EXPECT_NEAR(g.laplacian_symbol(std::vector<int>{1, 1}), -8 * kPi * kPi, 1e-12);
  EXPECT_NEAR(g.laplacian_symbol(std::vector<int>{-4, 3}), -4 * kPi * kPi * 25, 1e-9);
  EXPECT_THROW(g.laplacian_symbol(std::vector<int>{4, 0}), FrequencyOutOfRange);
  EXPECT_THROW(g.laplacian_symbol(std::vector<int>{0, -5}), FrequencyOutOfRange);
  const SpectralGrid r({4, 4}, {2, 0.5});
  EXPECT_NEAR(r.laplacian_symbol(std::vector<int>{1, 1}), -4 * kPi * kPi * (0.25 + 4), 1e-12);
  EXPECT_EQ(g.signed_frequency(0, 5), -3);
  EXPECT_EQ(g.signed_frequency(0, 4), -4);
  EXPECT_EQ(g.signed_frequency(0, 3), 3);
}

TEST(Grid, HalfSpectrumSymbolMatchesFullSymbol) {
  const SpectralGrid g({4, 6}, {1, 3});
  const auto sym = g.negative_laplacian_half_spectrum();
  ASSERT_EQ(sym.size(), g.spectrum_count());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= 3; ++j) {
      const int k[] = {g.signed_frequency(0, i), j == 3 ? -3 : j};
      EXPECT_NEAR(sym[i * 4 + j], -g.laplacian_symbol(k), 1e-12);
    }
}

TEST(Transform, ConstantFieldHasOnlyMeanMode) {
  const SpectralGrid g({8, 6}, {1, 1});
  FourierTransform fft(g);
  const auto s = fft.forward(ScalarField(g, 2.5));
  const int zero[] = {0, 0};
  EXPECT_NEAR(std::abs(s.coefficient(zero) - Complex(2.5)), 0.0, 1e-14);
  double rest = 0.0;
  for (std::size_t j = 1; j < s.half().size(); ++j)
    rest = std::max(rest, std::abs(s.half()[j]));
  EXPECT_LT(rest, 1e-14);
}

TEST(Transform, CosineHasTwoConjugateModes) {
  const SpectralGrid g({8, 4}, {2.0, 1.0});
  ScalarField f(g);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = std::cos(2 * kPi * g.node(i)[0] / 2.0);
  FourierTransform fft(g);
  const auto s = fft.forward(f);
  for (int k0 = -4; k0 < 4; ++k0)
    for (int k1 = -2; k1 < 2; ++k1) {
      const int k[] = {k0, k1};
      const double expect = (k1 == 0 && (k0 == 1 || k0 == -1)) ? 0.5 : 0.0;
      EXPECT_NEAR(std::abs(s.coefficient(k) - Complex(expect)), 0.0, 1e-14)
          << k0 << "," << k1;
    }
}

TEST(Transform, MatchesDirectSumOnRandomField) {
  for (auto sizes : {std::vector<int>{6, 4}, std::vector<int>{4, 2, 6}}) {
    std::vector<double> lengths(sizes.size(), 1.0);
    const SpectralGrid g(sizes, lengths);
    const auto f = random_field(g, 11);
    FourierTransform fft(g);
    const auto s = fft.forward(f);
    std::vector<int> k(sizes.size());
    for (std::size_t flat = 0; flat < g.node_count(); ++flat) {
      const auto idx = g.multi_index(flat);
      for (int a = 0; a < g.dim(); ++a)
        k[a] = g.signed_frequency(a, idx[a]);
      ASSERT_LT(std::abs(s.coefficient(k) - dft_coefficient(f, k)), 1e-13);
    }
    const int zero[] = {0, 0, 0};
    EXPECT_NEAR(s.coefficient(std::span<const int>(zero, sizes.size())).real(), f.mean(), 1e-12);
    EXPECT_THROW(s.coefficient(std::vector<int>(sizes.size(), 99)), FrequencyOutOfRange);
  }
}

TEST(Transform, RoundTripIsIdentity) {
  const SpectralGrid g({16, 8}, {1, 1});
  const auto f = random_field(g, 3);
  FourierTransform fft(g);
  const auto back = fft.inverse(fft.forward(f));
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    err = std::max(err, std::abs(back[i] - f[i]));
  EXPECT_LT(err, 1e-12);
  FourierTransform moved = std::move(fft);
  EXPECT_EQ(moved.grid(), g);
}

TEST(Transform, ForwardIsDeterministic) {
  const SpectralGrid g({32, 32}, {1, 1});
  const auto f = random_field(g, 8);
  FourierTransform a(g), b(g);
  const auto sa = a.forward(f);
  const auto sb = b.forward(f);
  for (std::size_t j = 0; j < sa.half().size(); ++j)
    ASSERT_EQ(sa.half()[j], sb.half()[j]);
}

TEST(Helmholtz, AnalyticModes) {
  const SpectralGrid g({16, 16}, {1, 1});
  const auto one = apply_helmholtz_inverse(ScalarField(g, 1.0), 0.3, 0.0);
  for (std::size_t i = 0; i < one.size(); ++i)
    ASSERT_NEAR(one[i], 1.0, 1e-14);
  ScalarField c(g);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = std::cos(2 * kPi * g.node(i)[0]);
  const auto v = apply_helmholtz_inverse(c, 1.0, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    ASSERT_NEAR(v[i], c[i] / (1 + 4 * kPi * kPi), 1e-14);
  // shift c: constants scale by 1 / (1 + a c)
  const auto s = apply_helmholtz_inverse(ScalarField(g, 1.0), 0.5, 2.0);
  EXPECT_NEAR(s[0], 0.5, 1e-14);
  const auto id = apply_helmholtz_inverse(c, 0.0, 3.0);
  EXPECT_EQ(id, c);
  EXPECT_THROW(apply_helmholtz_inverse(c, -1.0, 0.0), InvalidArgument);
  EXPECT_THROW(apply_helmholtz_inverse(c, 1.0, -1.0), InvalidArgument);
}

TEST(Helmholtz, LinearAndContractive) {
  const SpectralGrid g({32, 16}, {1, 2});
  const auto f = random_field(g, 21);
  const auto h = random_field(g, 22);
  ScalarField sum(g);
  for (std::size_t i = 0; i < sum.size(); ++i)
    sum[i] = 2.0 * f[i] - h[i];
  const auto vf = apply_helmholtz_inverse(f, 0.01, 1.0);
  const auto vh = apply_helmholtz_inverse(h, 0.01, 1.0);
  const auto vs = apply_helmholtz_inverse(sum, 0.01, 1.0);
  double in_max = 0.0, out_max = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    ASSERT_NEAR(vs[i], 2.0 * vf[i] - vh[i], 1e-12);
    in_max = std::max(in_max, std::abs(f[i]));
    out_max = std::max(out_max, std::abs(vf[i]));
  }
  EXPECT_LE(out_max, in_max + 1e-10);
}

TEST(ScalarField, Basics) {
  const SpectralGrid g({4, 4}, {1, 1});
  EXPECT_THROW(ScalarField(g, std::vector<double>(15)), SizeMismatch);
  ScalarField f(g, 0.25);
  EXPECT_DOUBLE_EQ(f.mean(), 0.25);
  EXPECT_TRUE(f.all_finite());
  f[7] = std::nan("");
  EXPECT_FALSE(f.all_finite());
}
