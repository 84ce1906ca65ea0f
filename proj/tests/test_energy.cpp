#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rdv/energy.hpp"
#include "rdv/spaces.hpp"

namespace rdv {
namespace {

TEST(WienerEnergy, DualKernelExamples) {
  const auto t2 = dual_kernel(oracle::t2());
  const auto w = wiener_energy(t2.space, all_indices(2));
  EXPECT_NEAR(w.value, 0.5, 1e-9);
  EXPECT_NEAR(w.point[0], 0.5, 1e-6);

  const auto k3 = dual_kernel(oracle::k3());
  EXPECT_NEAR(wiener_energy(k3.space, all_indices(3)).value, 1.0 / 3.0, 1e-9);
}

TEST(FrostmanCheck, EquilibriumPassesAllVerdicts) {
  const auto d = dual_kernel(oracle::g3());
  const auto w = wiener_energy(d.space, all_indices(3));
  const auto f = frostman_check(d.space, all_indices(3), w.point, w.value);
  EXPECT_TRUE(f.verdict_A);
  EXPECT_TRUE(f.verdict_B);
  EXPECT_TRUE(f.verdict_C);
  EXPECT_TRUE(f.all());
}

TEST(FrostmanCheck, NonEquilibriumFails) {
  const auto d = dual_kernel(oracle::g3());
  const auto H = all_indices(3);
  const auto w = wiener_energy(d.space, H).value;
  const auto f = frostman_check(d.space, H, Measure::dirac(3, 1), w);
  EXPECT_FALSE(f.all());
}

TEST(MaximalEnergy, HandExamples) {
  EXPECT_NEAR(maximal_energy(oracle::t2()).value, 0.5, 1e-9);
  EXPECT_NEAR(maximal_energy(oracle::k3()).value, 2.0 / 3.0, 1e-9);
  const auto g = maximal_energy(oracle::g3());
  EXPECT_NEAR(g.value, 0.5, 1e-9);
  ASSERT_TRUE(g.negative_type.has_value());
  EXPECT_TRUE(*g.negative_type);
  ASSERT_TRUE(g.route_residual.has_value());
  EXPECT_LE(*g.route_residual, kRouteTolerance);
}

TEST(WolfRelations, TwoPointEquality) {
  const auto w = wolf_relations(oracle::t2());
  EXPECT_TRUE(w.holds());
  EXPECT_TRUE(w.equality);
  ASSERT_TRUE(w.invariant_found.has_value());
  EXPECT_TRUE(*w.invariant_found);
  EXPECT_NEAR(w.r_dual, 0.5, 1e-9);
  EXPECT_NEAR(w.w_dual, 0.5, 1e-9);
}

TEST(WolfRelations, RejectsNonMetric) {
  const auto k = validate_kernel({{0, 3}, {3, 1}}, false);
  EXPECT_THROW(wolf_relations(k), Error);
}

class EnergyProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(EnergyProperties, GridOracleAndOrdering) {
  const auto k = generate(SpaceDescriptor::random_graph(4, 0.5, GetParam()));
  const auto all = all_indices(4);
  const auto E = maximal_energy(k);
  const double gmax = oracle::grid_max_energy(k, all, 40);
  EXPECT_GE(E.value, gmax - 1e-10);
  EXPECT_LE(E.value, gmax + 2.0 * k.max_entry() * 4.0 / 40.0);

  const auto w = wolf_relations(k);
  EXPECT_TRUE(w.verdict_i);
  EXPECT_TRUE(w.verdict_dual);
  EXPECT_TRUE(w.holds());

  // The equilibrium of the dual kernel passes Frostman on every subset H.
  const auto d = dual_kernel(k);
  const auto H = IndexSet{0, 2, 3};
  const auto eq = wiener_energy(d.space, H);
  EXPECT_TRUE(frostman_check(d.space, H, eq.point, eq.value).all());
  EXPECT_LE(eq.value, oracle::grid_min_energy(d.space, H, 40) + 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Seeds, EnergyProperties, ::testing::Range<std::uint64_t>(40, 50));

}  // namespace
}  // namespace rdv
