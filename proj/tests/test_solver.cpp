#include "mcf/diagnostics.hpp"
#include "mcf/potential.hpp"
#include "mcf/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

using namespace mcf;

namespace {

bool bitwise_equal(const ScalarField &a, const ScalarField &b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

MobilitySet three_mob(double m12, double m13, double m23) {
  PairMatrix m(3);
  m.set_pair(0, 1, m12);
  m.set_pair(0, 2, m13);
  m.set_pair(1, 2, m23);
  return MobilitySet(m);
}

TensionSet unit_tensions(std::size_t n) {
  return std::get<TensionSet>(split_tensions(uniform_pairs(n, 1.0)));
}

// Two disks in a third phase, built straight from the profile.
PhaseState two_disks(const SpectralGrid &g, double eps) {
  PhaseState s(g, 3);
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    const auto p = g.node(x);
    const double d1 = std::hypot(p[0] + 0.25, p[1]) - 0.2;
    const double d2 = std::hypot(p[0] - 0.25, p[1]) - 0.2;
    s.field(0)[x] = potential::profile(d1 / eps);
    s.field(1)[x] = potential::profile(d2 / eps);
    s.field(2)[x] = 1.0 - s.field(0)[x] - s.field(1)[x];
  }
  return s;
}

SolverParams params_for(int k, double eps_c = 1.5, double dt_c = 0.25, long steps = 0) {
  SolverParams p;
  p.epsilon = eps_c / k;
  p.dt = dt_c / (double(k) * k);
  p.n_steps = steps;
  return p;
}

const SpectralGrid &grid64() {
  static const SpectralGrid g({64, 64}, {1, 1}, {-0.5, -0.5});
  return g;
}

} // namespace

TEST(SolverParams, Checks) {
  SolverParams p = params_for(64);
  EXPECT_NO_THROW(p.check());
  for (auto mutate : {+[](SolverParams &q) { q.epsilon = 0; }, +[](SolverParams &q) { q.dt = -1; },
                      +[](SolverParams &q) { q.beta = 0; }, +[](SolverParams &q) { q.alpha = -1; },
                      +[](SolverParams &q) { q.n_steps = -1; }}) {
    SolverParams q = p;
    mutate(q);
    EXPECT_THROW(q.check(), InvalidArgument);
  }
}

TEST(PhaseState, Construction) {
  const SpectralGrid other({8, 8}, {1, 1});
  EXPECT_THROW(PhaseState({ScalarField(grid64()), ScalarField(other)}), DimensionMismatch);
  EXPECT_THROW(PhaseState(grid64(), 0), InvalidArgument);
  const PhaseState s(grid64(), 3, 0.5);
  EXPECT_EQ(s.n_phases(), 3u);
  EXPECT_EQ(s.time(), 0.5);
}

TEST(Step1, PureStatesAreFixedPoints) {
  const auto &g = grid64();
  auto p = params_for(64);
  p.alpha = 2.0;
  const auto dec = canonical_decomposition(three_mob(1, 1, 1));
  PhaseState s(g, 3);
  s.field(0) = ScalarField(g, 1.0);
  const auto out = step1_decoupled(s, unit_tensions(3), dec, p);
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    ASSERT_NEAR(out.field(0)[x], 1.0, 1e-14);
    ASSERT_NEAR(out.field(1)[x], 0.0, 1e-14);
    ASSERT_NEAR(out.field(2)[x], 0.0, 1e-14);
  }
}

TEST(Step1, FlatProfileIsNearlyStationary) {
  const int k = 512;
  const SpectralGrid g({k}, {1.0}, {-0.5});
  const double eps = 4.0 / k;
  PhaseState s(g, 2);
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    const double d = std::abs(g.node(x)[0]) - 0.25;
    s.field(0)[x] = potential::profile(d / eps);
    s.field(1)[x] = 1.0 - s.field(0)[x];
  }
  PairMatrix m(2);
  m.set_pair(0, 1, 1.0);
  SolverParams p;
  p.epsilon = eps;
  p.dt = 0.25 / (double(k) * k);
  const auto out = step1_decoupled(s, unit_tensions(2), canonical_decomposition(MobilitySet(m)), p);
  const int line[] = {0};
  const auto before = half_level_crossings(s, 0, 0, line);
  const auto after = half_level_crossings(out, 0, 0, line);
  ASSERT_EQ(before.size(), 2u);
  ASSERT_EQ(after.size(), 2u);
  for (int j = 0; j < 2; ++j)
    EXPECT_LE(std::abs(after[j] - before[j]), 1e-3 * eps);
}

TEST(Step2, IdentityWhenNothingMoved) {
  const auto &g = grid64();
  const auto s = two_disks(g, 1.5 / 64);
  const auto dec = canonical_decomposition(three_mob(1, 1, 0.25));
  const auto out = step2_project(s, s, dec, params_for(64));
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_TRUE(bitwise_equal(out.field(k), s.field(k)));
}

TEST(Step2, RestoresPartitionAndKeepsFrozenPhase) {
  const auto &g = grid64();
  const auto s = two_disks(g, 1.5 / 64);
  const auto p = params_for(64);
  // phase 2 has no mobile interface
  const auto dec = canonical_decomposition(three_mob(0, 1, 0));
  ASSERT_EQ(dec.m_star()[1], 0.0);
  const auto half = step1_decoupled(s, unit_tensions(3), dec, p);
  EXPECT_GT(constraint_error(half), 1e-6);
  const auto out = step2_project(half, s, dec, p);
  EXPECT_TRUE(bitwise_equal(out.field(1), s.field(1)));
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    double before = 0.0, after = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      before += s.field(k)[x];
      after += out.field(k)[x];
    }
    ASSERT_LE(std::abs(after - before), 1e-12);
  }
}

TEST(Step, ZeroMobilityLeavesStateUnchanged) {
  const auto &g = grid64();
  const auto s = two_disks(g, 1.5 / 64);
  const auto dec = canonical_decomposition(three_mob(0, 0, 0));
  const auto out = step(s, unit_tensions(3), dec, params_for(64));
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_TRUE(bitwise_equal(out.field(k), s.field(k)));
  EXPECT_DOUBLE_EQ(out.time(), params_for(64).dt);
}

TEST(Step, RejectsMismatchedInputs) {
  const auto &g = grid64();
  const auto dec = canonical_decomposition(three_mob(1, 1, 1));
  EXPECT_THROW(SplittingScheme(g, unit_tensions(4), dec, params_for(64)), DimensionMismatch);
  SplittingScheme scheme(g, unit_tensions(3), dec, params_for(64));
  EXPECT_THROW(scheme.step(PhaseState(g, 2)), DimensionMismatch);
  EXPECT_THROW(scheme.step(PhaseState(SpectralGrid({8, 8}, {1, 1}), 3)), DimensionMismatch);
}

TEST(Step, PermutingLabelsPermutesTrajectory) {
  const auto &g = grid64();
  const auto s = two_disks(g, 1.5 / 64);
  PairMatrix sig(3);
  sig.set_pair(0, 1, 0.1);
  sig.set_pair(0, 2, 1.0);
  sig.set_pair(1, 2, 1.0);
  const auto ts = std::get<TensionSet>(split_tensions(sig));
  // swap phases 1 and 2
  PhaseState sw({s.field(1), s.field(0), s.field(2)});
  PairMatrix sig_sw(3);
  sig_sw.set_pair(0, 1, 0.1);
  sig_sw.set_pair(1, 2, 1.0);
  sig_sw.set_pair(0, 2, 1.0);
  const auto ts_sw = std::get<TensionSet>(split_tensions(sig_sw));
  auto p = params_for(64, 1.5, 0.25, 20);
  const auto a = evolve(s, ts, canonical_decomposition(three_mob(1, 0.5, 0.25)), p);
  const auto b = evolve(sw, ts_sw, canonical_decomposition(three_mob(1, 0.25, 0.5)), p);
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    ASSERT_NEAR(a.field(0)[x], b.field(1)[x], 1e-12);
    ASSERT_NEAR(a.field(1)[x], b.field(0)[x], 1e-12);
    ASSERT_NEAR(a.field(2)[x], b.field(2)[x], 1e-12);
  }
}

TEST(Evolve, ZeroStepsReturnsInput) {
  const auto s = two_disks(grid64(), 1.5 / 64);
  long calls = 0;
  const StepHook hooks[] = {{5, [&](const PhaseState &, long step) {
                               EXPECT_EQ(step, 0);
                               ++calls;
                             }}};
  const auto out = evolve(s, unit_tensions(3), canonical_decomposition(three_mob(1, 1, 1)),
                          params_for(64), hooks);
  EXPECT_EQ(out, s);
  EXPECT_EQ(calls, 1);
}

TEST(Evolve, HooksAreReadOnlyAndFireOnSchedule) {
  const auto s = two_disks(grid64(), 1.5 / 64);
  const auto ts = unit_tensions(3);
  const auto dec = canonical_decomposition(three_mob(1, 1, 0.25));
  const auto p = params_for(64, 1.5, 0.25, 23);
  std::vector<long> seen;
  const StepHook every5[] = {{5, [&](const PhaseState &st, long step) {
                                seen.push_back(step);
                                EXPECT_NEAR(st.time(), step * p.dt, 1e-18);
                              }}};
  const auto a = evolve(s, ts, dec, p, every5);
  EXPECT_EQ(seen, (std::vector<long>{0, 5, 10, 15, 20, 23}));
  const StepHook every10[] = {{10, [](const PhaseState &, long) {}}};
  const auto b = evolve(s, ts, dec, p, every10);
  const auto c = evolve(s, ts, dec, p);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_DOUBLE_EQ(a.time(), 23 * p.dt);
}

TEST(Evolve, NonFiniteFieldAborts) {
  auto s = two_disks(grid64(), 1.5 / 64);
  s.field(2)[100] = std::nan("");
  try {
    evolve(s, unit_tensions(3), canonical_decomposition(three_mob(1, 1, 1)),
           params_for(64, 1.5, 0.25, 5));
    FAIL() << "no exception";
  } catch (const NonFiniteField &e) {
    EXPECT_EQ(e.step(), 1);
    EXPECT_NE(std::string(e.what()).find("phase"), std::string::npos);
  }
}

TEST(Evolve, PartitionHoldsOverManySteps) {
  const auto s = two_disks(grid64(), 1.5 / 64);
  double worst = 0.0;
  const StepHook hooks[] = {{10, [&](const PhaseState &st, long) {
                               worst = std::max(worst, constraint_error(st));
                             }}};
  evolve(s, unit_tensions(3), canonical_decomposition(three_mob(1, 1, 0.25)),
         params_for(64, 1.5, 0.25, 400), hooks);
  EXPECT_LE(worst, 1e-10);
}

TEST(Evolve, SparseMatchesCanonicalForAdditiveMobilities) {
  const auto &g = grid64();
  const auto s = two_disks(g, 1.5 / 64);
  const auto mob = three_mob(1, 1, 1);
  const auto p = params_for(64, 1.5, 0.25, 300);
  const auto a = evolve(s, unit_tensions(3), canonical_decomposition(mob), p);
  const auto b = evolve(s, unit_tensions(3), sparse_decomposition(mob), p);
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_LE(interface_displacement(a, b, k), 1);
}
