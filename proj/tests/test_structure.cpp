#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rdv/converse.hpp"
#include "rdv/spaces.hpp"
#include "rdv/structure.hpp"

namespace rdv {
namespace {

TEST(InvariantMeasure, TwoPointAndGrid) {
  const auto t2 = invariant_measure(oracle::t2(), SubsetPair::full(2));
  ASSERT_TRUE(t2.found);
  EXPECT_NEAR((*t2.measure)[0], 0.5, 1e-9);
  EXPECT_NEAR(*t2.constant, 0.5, 1e-9);

  const auto g3 = invariant_measure(oracle::g3(), SubsetPair::full(3));
  ASSERT_TRUE(g3.found);
  EXPECT_NEAR((*g3.measure)[0], 0.5, 1e-9);
  EXPECT_NEAR((*g3.measure)[2], 0.5, 1e-9);
  ASSERT_TRUE(g3.average_consistent.has_value());
  EXPECT_TRUE(*g3.average_consistent);
}

TEST(InvariantMeasure, CollinearPathUsesEndpoints) {
  // Three collinear points at 0, 1 and 11: endpoint masses 1/2 give potential 11/2 everywhere.
  const auto k = validate_kernel({{0, 1, 11}, {1, 0, 10}, {11, 10, 0}}, true);
  const auto r = invariant_measure(k, SubsetPair::full(3));
  ASSERT_TRUE(r.found);
  EXPECT_NEAR((*r.measure)[0], 0.5, 1e-9);
  EXPECT_NEAR((*r.measure)[1], 0.0, 1e-9);
  EXPECT_NEAR((*r.measure)[2], 0.5, 1e-9);
  EXPECT_NEAR(*r.constant, 5.5, 1e-9);
  EXPECT_LE(oracle::grid_min_gap(k, all_indices(3), all_indices(3), 200), 1e-12);
}

TEST(InvariantMeasure, GapMatchesGridOnRestrictedSupport) {
  // With H = {0, 1} no measure levels the potential; the LP gap is the grid optimum.
  const auto k = validate_kernel({{0, 1, 11}, {1, 0, 10}, {11, 10, 0}}, true);
  const auto pair = SubsetPair::make({0, 1}, {0, 1, 2}, 3);
  const auto r = invariant_measure(k, pair);
  EXPECT_FALSE(r.found);
  const double grid = oracle::grid_min_gap(k, pair.H, pair.L, 200);
  EXPECT_LE(r.gap, grid + 1e-9);
  EXPECT_GE(r.gap, grid - 2.0 * k.max_entry() * 2.0 / 200.0);
}

TEST(InvariantMeasure, SingletonOfK3) {
  const auto r = min_invariance_gap(oracle::k3(), SubsetPair::make({0, 1}, {0, 1, 2}, 3));
  EXPECT_NEAR(r.gap, 0.5, 1e-9);
}

TEST(QuasiInvariance, Examples) {
  const auto eps = std::vector<double>{0.5, 0.25, 0.125};
  const auto t2 = quasi_invariant_convergence(oracle::t2(), SubsetPair::full(2), eps);
  EXPECT_TRUE(t2.holds);
  for (const auto& e : t2.entries) {
    EXPECT_TRUE(e.feasible);
    EXPECT_NEAR(e.rho, 0.5, 1e-9);
  }
  const auto path = validate_kernel({{0, 1, 11}, {1, 0, 10}, {11, 10, 0}}, true);
  const auto pr = quasi_invariant_convergence(path, SubsetPair::make({0, 1}, {0, 1, 2}, 3), eps);
  EXPECT_TRUE(pr.holds);
  EXPECT_GT(pr.min_gap, 0.5);
  for (const auto& e : pr.entries) EXPECT_FALSE(e.feasible);
  EXPECT_THROW(quasi_invariant_convergence(path, SubsetPair::full(3), {0.1, 0.2}), Error);
  EXPECT_THROW(quasi_invariant_convergence(path, SubsetPair::full(3), {0.0}), Error);
}

TEST(NegativeType, KnownCases) {
  EXPECT_TRUE(negative_type_test(oracle::t2()).holds);
  EXPECT_TRUE(negative_type_test(oracle::k3()).holds);
  EXPECT_TRUE(negative_type_test(oracle::g3()).holds);
  const auto k23 = validate_kernel({{0, 2, 1, 1, 1},
                                    {2, 0, 1, 1, 1},
                                    {1, 1, 0, 2, 2},
                                    {1, 1, 2, 0, 2},
                                    {1, 1, 2, 2, 0}},
                                   true);
  const auto cert = negative_type_test(k23);
  EXPECT_FALSE(cert.holds);
  ASSERT_TRUE(cert.violating_vector.has_value());
  const auto& c = *cert.violating_vector;
  double sum = 0.0, form = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    sum += c[i];
    for (std::size_t j = 0; j < 5; ++j) form += c[i] * c[j] * k23(i, j);
  }
  EXPECT_NEAR(sum, 0.0, 1e-9);
  EXPECT_GT(form, 0.0);
}

TEST(NegativeType, AgreesWithEigenOnGrids) {
  for (std::size_t m : {2, 5, 17, 33, 64}) {
    const auto k = generate(SpaceDescriptor::interval_grid(m));
    const auto cert = negative_type_test(k);
    const auto ev = oracle::centered_eigenvalues(k.kernel());
    EXPECT_NEAR(cert.extreme_eigenvalue, ev.maxCoeff(), 1e-9) << m;
    EXPECT_TRUE(cert.holds) << m;
  }
}

TEST(NegativeType, CenteredDualIsNegatedCentered) {
  const auto k = generate(SpaceDescriptor::random_graph(7, 0.4, 3));
  const auto d = dual_kernel(k);
  const auto a = centered(k.kernel());
  const auto b = centered(d.space.kernel());
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(b(i, j), -a(i, j), 1e-12);
  }
  EXPECT_EQ(negative_type_test(k).holds, positive_type_on_sum_zero(d.space.kernel()));
}

class RandomNegativeType : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomNegativeType, MatchesEigenOracle) {
  const auto k = generate(SpaceDescriptor::random_graph(6, 0.5, GetParam()));
  const auto ev = oracle::centered_eigenvalues(k.kernel());
  const auto cert = negative_type_test(k);
  EXPECT_NEAR(cert.extreme_eigenvalue, ev.maxCoeff(), 1e-9);
  EXPECT_EQ(cert.holds, ev.maxCoeff() <= kDefinitenessThreshold);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomNegativeType, ::testing::Range<std::uint64_t>(0, 20));

TEST(VertexTransitive, UniformMeasureIsInvariant) {
  std::vector<KernelSpace> spaces;
  for (std::size_t m = 3; m <= 8; ++m) spaces.push_back(generate(SpaceDescriptor::circle(m, CircleMetric::arc)));
  for (std::size_t d = 1; d <= 4; ++d) spaces.push_back(generate(SpaceDescriptor::hypercube(d)));
  for (const auto& k : spaces) {
    const auto full = SubsetPair::full(k.size());
    const auto inv = invariant_measure(k, full);
    ASSERT_TRUE(inv.found) << k.name();
    // Independent check: potentials of the uniform measure are constant.
    const auto u = potentials(k, Measure::uniform(k.size()));
    for (double v : u) EXPECT_NEAR(v, u[0], 1e-12) << k.name();
    EXPECT_NEAR(*inv.constant, u[0], 1e-8) << k.name();
  }
}

TEST(Converse, TwoPointAndGrid) {
  const auto mc = metric_converse(oracle::t2());
  ASSERT_TRUE(mc.applicable) << mc.reason;
  EXPECT_TRUE(mc.holds);
  EXPECT_NEAR(mc.r, 0.5, 1e-9);
  EXPECT_NEAR(mc.E, 0.5, 1e-9);

  const auto g = metric_converse(oracle::g3());
  ASSERT_TRUE(g.applicable) << g.reason;
  EXPECT_TRUE(g.holds);

  const auto d = dual_kernel(oracle::g3());
  const auto kc = kernel_converse(d.space, SubsetPair::full(3));
  ASSERT_TRUE(kc.applicable) << kc.reason;
  EXPECT_TRUE(kc.holds);
  EXPECT_NEAR(kc.a, kc.w, 1e-7);
}

TEST(Converse, GatesReportReasons) {
  const auto k = oracle::k3();
  const auto general = kernel_converse(k, SubsetPair::make({0, 1}, {1, 2}, 3));
  EXPECT_FALSE(general.applicable);
  EXPECT_FALSE(general.reason.empty());
  const auto nonmetric = metric_converse(validate_kernel({{0, 3}, {3, 1}}, false));
  EXPECT_FALSE(nonmetric.applicable);
}

}  // namespace
}  // namespace rdv
