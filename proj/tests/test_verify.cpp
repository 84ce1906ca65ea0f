#include <gtest/gtest.h>

#include <filesystem>

#include "rdv/verify.hpp"

namespace rdv {
namespace {

TEST(Verify, ParseSuites) {
  EXPECT_EQ(parse_suites("all").size(), kAllSuites.size());
  EXPECT_EQ(parse_suites("wolf"), std::vector<Suite>{Suite::wolf});
  EXPECT_THROW(parse_suites("everything"), Error);
}

TEST(Verify, InstancesAreDeterministicAndNested) {
  VerifyOptions opt;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = make_instance(seed, opt);
    const auto b = make_instance(seed, opt);
    EXPECT_EQ(a.space.kernel(), b.space.kernel());
    EXPECT_EQ(a.nested.H, b.nested.H);
    EXPECT_EQ(a.general.L, b.general.L);
    EXPECT_TRUE(a.nested.nested());
    EXPECT_GE(a.space.size(), opt.min_points);
    EXPECT_LE(a.space.size(), opt.max_points);
  }
  opt.min_points = 5;
  opt.max_points = 4;
  EXPECT_THROW(make_instance(0, opt), Error);
}

TEST(Verify, SmallRunPassesAndIsReproducible) {
  VerifyOptions opt;
  opt.seeds = 5;
  opt.first_seed = 7;
  const auto a = run_verify(opt);
  const auto b = run_verify(opt);
  EXPECT_TRUE(a.all_pass()) << verify_table(a, opt);
  EXPECT_EQ(verify_to_json(a, opt).dump(2), verify_to_json(b, opt).dump(2));
  const auto table = verify_table(a, opt);
  EXPECT_NE(table.find("wolf: 5/5 pass"), std::string::npos);
  EXPECT_EQ(a.instances.front().seed, 7u);
}

TEST(Verify, WolfNotesRecordTheVacuousBranch) {
  VerifyOptions opt;
  opt.suites = {Suite::wolf};
  opt.seeds = 1;
  opt.min_points = opt.max_points = 6;
  const auto r = run_verify(opt);
  ASSERT_TRUE(r.all_pass());
  EXPECT_EQ(r.instances[0].outcomes.at("wolf").note, "r < E, equality branch vacuous");
}

}  // namespace
}  // namespace rdv
