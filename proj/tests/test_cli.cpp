#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "rdv_cli.hpp"

namespace rdv {
namespace {

const std::string kFixtures = RDV_FIXTURE_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rdv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "rdv-cli-test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(Cli, GeneratorSpecs) {
  const auto g = cli::parse_generator_expression("interval_grid(101)");
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(g->m, 101u);
  const auto c = cli::parse_generator_expression("circle(512, arc, 2)");
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->circle_metric, CircleMetric::arc);
  EXPECT_DOUBLE_EQ(c->radius, 2.0);
  EXPECT_FALSE(cli::parse_generator_expression("some/file.json").has_value());
  EXPECT_THROW(cli::parse_generator_expression("circle(8,round)"), Error);
  EXPECT_THROW(cli::parse_generator_expression("hypercube(x)"), Error);
}

TEST(Cli, AnalyzeTwoPointFile) {
  const auto r = run_cli({"analyze", kFixtures + "/two_point.json", "--n-max", "3"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  const auto rep = report_from_string(r.out);
  EXPECT_NEAR(rep.scalars.at("r"), 0.5, 1e-9);
  EXPECT_NEAR(rep.scalars.at("chebyshev.M_1"), 0.0, 1e-12);
  EXPECT_NEAR(rep.scalars.at("chebyshev.Mbar_1"), 1.0, 1e-12);
  EXPECT_NEAR(rep.scalars.at("chebyshev.M_2"), 0.5, 1e-12);
  EXPECT_NEAR(rep.scalars.at("chebyshev.Mbar_2"), 0.5, 1e-12);
  // Three visits split 2:1 between the two points.
  EXPECT_NEAR(rep.scalars.at("chebyshev.M_3"), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(rep.scalars.at("chebyshev.Mbar_3"), 2.0 / 3.0, 1e-12);
  EXPECT_FALSE(rep.scalars.contains("chebyshev.M_4"));
}

TEST(Cli, AnalyzeAsymmetricExitsOne) {
  const auto r = run_cli({"analyze", kFixtures + "/asymmetric.json"});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("AsymmetricKernel"), std::string::npos) << r.err;
}

TEST(Cli, AnalyzeCsvAndSubsets) {
  const auto r = run_cli({"analyze", "interval_grid(5)", "--H", "0,4", "--format", "csv"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("name,value\n", 0), 0u);
  EXPECT_NE(r.out.find("\nq,0.5\n"), std::string::npos) << r.out;
}

TEST(Cli, AnalyzeBadInputs) {
  EXPECT_EQ(run_cli({"analyze", "no-such-file.json"}).code, cli::kExitInput);
  EXPECT_EQ(run_cli({"analyze", "interval_grid(5)", "--tol", "bogus=1"}).code, cli::kExitInput);
  EXPECT_EQ(run_cli({"analyze", "interval_grid(5)", "--H", "9"}).code, cli::kExitInput);
  EXPECT_EQ(run_cli({"analyze", "interval_grid(5)", "--format", "xml"}).code, cli::kExitInput);
  EXPECT_EQ(run_cli({}).code, cli::kExitInput);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST(Cli, GenerateCircleIsAMetricFile) {
  const auto path = scratch("circle.json");
  const auto r = run_cli({"generate", "circle", "--m", "8", "--metric", "chord", "--out", path.string()});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  const auto loaded = load_space_file(path.string());
  EXPECT_EQ(loaded.space.size(), 8u);
  EXPECT_TRUE(loaded.space.is_metric());
}

TEST(Cli, GenerateIsByteIdentical) {
  const auto a = scratch("a.json"), b = scratch("b.json");
  EXPECT_EQ(run_cli({"generate", "random", "--n", "6", "--seed", "42", "--out", a.string()}).code, 0);
  EXPECT_EQ(run_cli({"generate", "random", "--n", "6", "--seed", "42", "--out", b.string()}).code, 0);
  EXPECT_EQ(read_text_file(a.string()), read_text_file(b.string()));
}

TEST(Cli, GenerateHypercubeTooLarge) {
  const auto r = run_cli({"generate", "hypercube", "--dim", "13"});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("TooLarge"), std::string::npos) << r.err;
}

TEST(Cli, VerifyWritesReportAndDumpsNothingOnSuccess) {
  const auto out = scratch("verify.json");
  const auto dump = scratch("dump");
  std::filesystem::remove_all(dump);
  const auto r = run_cli({"verify", "--suite", "duality", "--seeds", "3", "--out", out.string(),
                          "--dump-dir", dump.string()});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out;
  EXPECT_NE(r.out.find("duality: 3/3 pass"), std::string::npos);
  EXPECT_TRUE(std::filesystem::is_empty(dump));
  const auto doc = nlohmann::json::parse(read_text_file(out.string()));
  EXPECT_TRUE(doc.at("all_pass").get<bool>());
  EXPECT_EQ(run_cli({"verify", "--suite", "nope"}).code, cli::kExitInput);
}

}  // namespace
}  // namespace rdv
