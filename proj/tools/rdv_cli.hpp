#pragma once

// Command-line front end: analyze, generate, verify.
//
// Exit codes: 0 success, 1 bad input or invocation, 2 a mathematical verdict
// failed (hard failure in analyze, any failing instance in verify).

#include <cstdint>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdv/analysis.hpp"
#include "rdv/report.hpp"
#include "rdv/spaces.hpp"
#include "rdv/verify.hpp"

namespace rdv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitVerdict = 2;

/// Generator expressions as written in space names, e.g. "interval_grid(101)",
/// "circle(512,chord,1)", "hypercube(3)", "random_graph(6,0.5,42)".
inline std::optional<SpaceDescriptor> parse_generator_expression(const std::string& text) {
  static const std::regex shape(R"(^\s*([a-z_]+)\s*\(([^()]*)\)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, shape)) return std::nullopt;
  const std::string kind = m[1];
  std::vector<std::string> args;
  std::string cur;
  for (char ch : std::string(m[2])) {
    if (ch == ',') {
      args.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty() || !args.empty()) args.push_back(cur);
  auto bad = [&]() -> Error {
    return Error(ErrorCode::InvalidArgument, "malformed generator expression '" + text + "'");
  };
  try {
    if (kind == "interval_grid" && args.size() == 1) {
      return SpaceDescriptor::interval_grid(std::stoull(args[0]));
    }
    if (kind == "circle" && !args.empty() && args.size() <= 3) {
      CircleMetric metric = CircleMetric::chord;
      if (args.size() >= 2) {
        if (args[1] == "arc") {
          metric = CircleMetric::arc;
        } else if (args[1] != "chord") {
          throw bad();
        }
      }
      const double radius = args.size() == 3 ? std::stod(args[2]) : 1.0;
      return SpaceDescriptor::circle(std::stoull(args[0]), metric, radius);
    }
    if (kind == "hypercube" && args.size() == 1) return SpaceDescriptor::hypercube(std::stoull(args[0]));
    if ((kind == "random_graph" || kind == "random") && args.size() == 3) {
      return SpaceDescriptor::random_graph(std::stoull(args[0]), std::stod(args[1]),
                                           std::stoull(args[2]));
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  throw bad();
}

inline IndexSet parse_index_list(const std::string& text, std::size_t m) {
  std::vector<std::size_t> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    try {
      std::size_t used = 0;
      const auto v = std::stoull(cur, &used);
      if (used != cur.size()) throw std::invalid_argument(cur);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "bad index '" + cur + "'");
    }
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ') {
      flush();
    } else {
      cur.push_back(ch);
    }
  }
  flush();
  return make_index_set(std::move(out), m);
}

struct AnalyzeArgs {
  std::string source;
  std::optional<std::string> h, l;
  std::size_t n_max = 4;
  std::vector<std::string> tolerances;
  std::optional<std::string> out;
  std::string format = "report-file";
};

struct GenerateArgs {
  std::string kind;
  std::size_t m = 0;
  std::string metric = "chord";
  double radius = 1.0;
  std::size_t dim = 0;
  double edge_prob = 0.5;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
};

struct VerifyArgs {
  std::string suite = "all";
  std::size_t seeds = 100;
  std::uint64_t first_seed = 0;
  std::size_t min_points = 3;
  std::size_t max_points = 8;
  std::optional<std::string> out;
  std::optional<std::string> dump_dir;
};

inline int run_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  LoadedSpace loaded = [&] {
    if (std::filesystem::exists(a.source)) return load_space_file(a.source);
    if (auto desc = parse_generator_expression(a.source)) {
      auto space = generate(*desc);
      const auto m = space.size();
      return LoadedSpace{std::move(space), SubsetPair::full(m)};
    }
    throw Error(ErrorCode::IoError, "no such file or generator expression '" + a.source + "'");
  }();
  const auto m = loaded.space.size();
  SubsetPair pair = loaded.subsets;
  if (a.h) pair.H = parse_index_list(*a.h, m);
  if (a.l) pair.L = parse_index_list(*a.l, m);

  AnalyzeOptions opt;
  opt.n_max = a.n_max;
  for (const auto& t : a.tolerances) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--tol expects name=value");
    double v = 0.0;
    try {
      v = std::stod(t.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "bad tolerance value in '" + t + "'");
    }
    opt.set_tolerance(t.substr(0, eq), v);
  }

  const auto result = analyze(loaded.space, pair, opt);
  const std::string text =
      a.format == "csv" ? report_to_csv(result.report) : report_to_string(result.report);
  if (a.out) {
    write_text_file(*a.out, text);
  } else {
    out << text;
  }
  for (const auto& f : result.hard_failures) err << "hard failure: " << f << "\n";
  return result.hard_failures.empty() ? kExitOk : kExitVerdict;
}

inline int run_generate(const GenerateArgs& a, std::ostream& out) {
  SpaceDescriptor d;
  if (a.kind == "interval_grid" || a.kind == "grid") {
    d = SpaceDescriptor::interval_grid(a.m);
  } else if (a.kind == "circle") {
    if (a.metric != "chord" && a.metric != "arc") {
      throw Error(ErrorCode::InvalidArgument, "--metric must be chord or arc");
    }
    d = SpaceDescriptor::circle(a.m, a.metric == "arc" ? CircleMetric::arc : CircleMetric::chord,
                                a.radius);
  } else if (a.kind == "hypercube") {
    d = SpaceDescriptor::hypercube(a.dim);
  } else if (a.kind == "random" || a.kind == "random_graph") {
    d = SpaceDescriptor::random_graph(a.m, a.edge_prob, a.seed);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown generator '" + a.kind + "'");
  }
  const std::string text = space_to_string(generate(d));
  if (a.out) {
    write_text_file(*a.out, text);
  } else {
    out << text;
  }
  return kExitOk;
}

inline int run_verify_command(const VerifyArgs& a, std::ostream& out) {
  VerifyOptions opt;
  opt.suites = parse_suites(a.suite);
  opt.seeds = a.seeds;
  opt.first_seed = a.first_seed;
  opt.min_points = a.min_points;
  opt.max_points = a.max_points;
  opt.dump_dir = a.dump_dir;
  const auto result = run_verify(opt);
  out << verify_table(result, opt);
  if (a.out) write_text_file(*a.out, verify_to_json(result, opt).dump(2) + "\n");
  return result.all_pass() ? kExitOk : kExitVerdict;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Rendezvous numbers, average intervals and energies of finite kernel spaces"};
  app.require_subcommand(1);

  AnalyzeArgs aa;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a space file or generator expression");
  analyze_cmd->add_option("source", aa.source, "Space file, or an expression such as interval_grid(101)")
      ->required();
  analyze_cmd->add_option("--H", aa.h, "Comma-separated indices of H");
  analyze_cmd->add_option("--L", aa.l, "Comma-separated indices of L");
  analyze_cmd->add_option("--n-max", aa.n_max, "Largest Chebyshev order")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--tol", aa.tolerances, "Tolerance override name=value (repeatable)");
  analyze_cmd->add_option("--out", aa.out, "Write the report here instead of stdout");
  analyze_cmd->add_option("--format", aa.format, "report-file or csv")
      ->check(CLI::IsMember({"report-file", "csv"}));

  GenerateArgs ga;
  auto* generate_cmd = app.add_subcommand("generate", "Write a generated space file");
  generate_cmd->add_option("kind", ga.kind, "interval_grid, circle, hypercube or random")->required();
  generate_cmd->add_option("--m,--n", ga.m, "Number of points");
  generate_cmd->add_option("--metric", ga.metric, "Circle metric: chord or arc");
  generate_cmd->add_option("--radius", ga.radius, "Circle radius");
  generate_cmd->add_option("--dim", ga.dim, "Hypercube dimension");
  generate_cmd->add_option("--edge-prob", ga.edge_prob, "Random graph edge probability");
  generate_cmd->add_option("--seed", ga.seed, "Random graph seed");
  generate_cmd->add_option("--out", ga.out, "Output path (default stdout)");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Run seeded verification suites");
  verify_cmd->add_option("--suite", va.suite, "chain, duality, frostman, wolf, converse, quasi or all");
  verify_cmd->add_option("--seeds", va.seeds, "Number of seeds");
  verify_cmd->add_option("--first-seed", va.first_seed, "First seed");
  verify_cmd->add_option("--min-points", va.min_points, "Fewest points per instance");
  verify_cmd->add_option("--max-points", va.max_points, "Most points per instance");
  verify_cmd->add_option("--out", va.out, "Write the JSON report here");
  verify_cmd->add_option("--dump-dir", va.dump_dir, "Directory for failing instances");

  // Long flags only.
  app.allow_windows_style_options(false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*analyze_cmd) return run_analyze(aa, out, err);
    if (*generate_cmd) return run_generate(ga, out);
    if (*verify_cmd) return run_verify_command(va, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace rdv::cli
