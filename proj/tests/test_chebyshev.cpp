#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "rdv/chebyshev.hpp"
#include "rdv/minimax.hpp"
#include "rdv/potential.hpp"
#include "rdv/spaces.hpp"

namespace rdv {
namespace {

const SubsetPair kFull2 = SubsetPair::full(2);
const SubsetPair kFull3 = SubsetPair::full(3);

TEST(Chebyshev, TwoPointExamples) {
  const auto t2 = oracle::t2();
  EXPECT_EQ(chebyshev_n(t2, kFull2, 1).value, 0.0);
  const auto m2 = chebyshev_n(t2, kFull2, 2);
  EXPECT_DOUBLE_EQ(m2.value, 0.5);
  EXPECT_EQ(m2.witness.multiset, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(dual_chebyshev_n(t2, kFull2, 1).value, 1.0);
  const auto mb2 = dual_chebyshev_n(t2, kFull2, 2);
  EXPECT_DOUBLE_EQ(mb2.value, 0.5);
  EXPECT_EQ(mb2.witness.multiset, (std::vector<std::size_t>{0, 1}));
}

TEST(Chebyshev, CompleteGraphAndGrid) {
  const auto m3 = chebyshev_n(oracle::k3(), kFull3, 3);
  EXPECT_NEAR(m3.value, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(m3.witness.multiset, (std::vector<std::size_t>{0, 1, 2}));
  const auto g = dual_chebyshev_n(oracle::g3(), kFull3, 1);
  EXPECT_DOUBLE_EQ(g.value, 0.5);
  EXPECT_EQ(g.witness.multiset, (std::vector<std::size_t>{1}));
}

TEST(Chebyshev, RendezvousIntervals) {
  EXPECT_EQ(rendezvous_n(oracle::t2(), kFull2, 2), ValueInterval::point(0.5));
  EXPECT_EQ(rendezvous_n(oracle::t2(), kFull2, 1), ValueInterval::closed(0, 1));
  EXPECT_EQ(rendezvous_n(oracle::k3(), kFull3, 1), ValueInterval::closed(0, 1));
}

TEST(Chebyshev, LimitBounds) {
  const auto t2 = chebyshev_limit_bounds(oracle::t2(), kFull2, 4);
  EXPECT_DOUBLE_EQ(t2.lower, 0.5);
  EXPECT_DOUBLE_EQ(t2.upper, 0.5);
  const auto k3 = chebyshev_limit_bounds(oracle::k3(), kFull3, 3);
  EXPECT_NEAR(k3.lower, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(k3.upper, 2.0 / 3.0, 1e-15);
  const auto g = generate(SpaceDescriptor::random_graph(5, 0.5, 3));
  const auto one = chebyshev_limit_bounds(g, SubsetPair::full(5), 1);
  EXPECT_EQ(one.lower, chebyshev_n(g, SubsetPair::full(5), 1).value);
  EXPECT_EQ(one.upper, dual_chebyshev_n(g, SubsetPair::full(5), 1).value);
}

TEST(Chebyshev, CapIsEnforcedWithCounts) {
  const auto g = generate(SpaceDescriptor::interval_grid(60));
  try {
    chebyshev_n(g, SubsetPair::full(60), 5);
    FAIL() << "expected EnumerationCapExceeded";
  } catch (const EnumerationCapError& e) {
    EXPECT_EQ(e.code(), ErrorCode::EnumerationCapExceeded);
    EXPECT_EQ(e.cap(), kDefaultEnumerationCap);
    EXPECT_DOUBLE_EQ(e.required(), multiset_count(60, 5));
  }
  EXPECT_THROW(chebyshev_n(oracle::t2(), {{}, {0}}, 1), Error);
}

class ChebyshevOracle : public ::testing::TestWithParam<std::uint64_t> {};

// Multiset enumeration agrees with the plain tuple enumeration, the table
// bounds are monotone, and the sandwich against the LP values holds.
TEST_P(ChebyshevOracle, MatchesTuplesAndSandwichesLp) {
  const auto k = generate(SpaceDescriptor::random_graph(5, 0.5, GetParam()));
  const std::vector<SubsetPair> pairs{SubsetPair::full(5), SubsetPair::make({0, 2}, {0, 1, 2, 3}, 5),
                                      SubsetPair::make({1, 4}, {0, 3}, 5)};
  for (const auto& p : pairs) {
    double run_max = -kInfinity, run_min = kInfinity;
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto lo = chebyshev_n(k, p, n);
      const auto hi = dual_chebyshev_n(k, p, n);
      EXPECT_NEAR(lo.value, oracle::tuple_chebyshev(k, p.H, p.L, n, true), 1e-12);
      EXPECT_NEAR(hi.value, oracle::tuple_chebyshev(k, p.H, p.L, n, false), 1e-12);

      // The witness multiset, as an average of Dirac masses, attains the value.
      std::vector<double> w(5, 0.0);
      for (auto i : lo.witness.multiset) w[i] += 1.0 / static_cast<double>(n);
      const Measure mu(w, p.H);
      EXPECT_NEAR(profile(k, mu, p.L).interval.lo(), lo.value, 1e-12);
      EXPECT_NEAR(potential_at(k, mu, lo.witness.extremal_point), lo.value, 1e-12);

      run_max = std::max(run_max, lo.value);
      run_min = std::min(run_min, hi.value);
    }
    const auto b = chebyshev_limit_bounds(k, p, 4);
    EXPECT_EQ(b.lower, run_max);
    EXPECT_EQ(b.upper, run_min);
    EXPECT_LE(b.lower, q_lower_value(k, p).value + 1e-8);
    EXPECT_GE(chebyshev_limit_bounds(k, {p.L, p.H}, 4).upper, q_value(k, {p.L, p.H}).value - 1e-8);
  }
}

TEST_P(ChebyshevOracle, PermutationEquivariance) {
  const auto k = generate(SpaceDescriptor::random_graph(5, 0.5, GetParam()));
  const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  Matrix pk(5, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) pk(perm[i], perm[j]) = k(i, j);
  }
  const auto kp = validate_kernel(pk, true);
  for (std::size_t n = 1; n <= 3; ++n) {
    EXPECT_NEAR(chebyshev_n(k, SubsetPair::full(5), n).value,
                chebyshev_n(kp, SubsetPair::full(5), n).value, 1e-12);
    EXPECT_NEAR(dual_chebyshev_n(k, SubsetPair::full(5), n).value,
                dual_chebyshev_n(kp, SubsetPair::full(5), n).value, 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ChebyshevOracle, ::testing::Values(11, 12, 13, 14, 15, 16));

TEST(Chebyshev, TieBreakKeepsLexicographicallyFirstWitness) {
  // Every single point of K3 gives M_1 = 0, so the first multiset wins.
  EXPECT_EQ(chebyshev_n(oracle::k3(), kFull3, 1).witness.multiset, (std::vector<std::size_t>{0}));
  EXPECT_EQ(dual_chebyshev_n(oracle::k3(), kFull3, 1).witness.multiset, (std::vector<std::size_t>{0}));
}

}  // namespace
}  // namespace rdv
