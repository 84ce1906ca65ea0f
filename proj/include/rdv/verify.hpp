#pragma once

// Seeded verification suites over random graph metrics. Each instance is a
// connected random_graph(m, edge_prob, seed) together with a nested pair
// (H inside L) and a general pair (H, L), both drawn from the seed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rdv/chebyshev.hpp"
#include "rdv/converse.hpp"
#include "rdv/core.hpp"
#include "rdv/energy.hpp"
#include "rdv/minimax.hpp"
#include "rdv/report.hpp"
#include "rdv/spaces.hpp"
#include "rdv/structure.hpp"

namespace rdv {

enum class Suite { chain, duality, frostman, wolf, converse, quasi };

inline constexpr std::array<Suite, 6> kAllSuites = {Suite::chain,    Suite::duality, Suite::frostman,
                                                    Suite::wolf,     Suite::converse, Suite::quasi};

inline std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::chain: return "chain";
    case Suite::duality: return "duality";
    case Suite::frostman: return "frostman";
    case Suite::wolf: return "wolf";
    case Suite::converse: return "converse";
    case Suite::quasi: return "quasi";
  }
  return "unknown";
}

/// "all" expands to every suite.
inline std::vector<Suite> parse_suites(std::string_view name) {
  if (name == "all") return {kAllSuites.begin(), kAllSuites.end()};
  for (auto s : kAllSuites) {
    if (to_string(s) == name) return {s};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown suite '" + std::string(name) + "'");
}

struct VerifyOptions {
  std::vector<Suite> suites{kAllSuites.begin(), kAllSuites.end()};
  std::size_t seeds = 100;
  std::uint64_t first_seed = 0;
  std::size_t min_points = 3;
  std::size_t max_points = 8;
  double edge_prob = 0.5;
  std::size_t chain_n_max = 3;
  std::optional<std::string> dump_dir;  // failing instances are written here
};

struct VerifyInstance {
  std::uint64_t seed = 0;
  KernelSpace space;
  SubsetPair nested;
  SubsetPair general;
};

namespace detail {

inline IndexSet random_subset(std::mt19937_64& rng, const IndexSet& from) {
  IndexSet out;
  for (auto i : from) {
    if (rng() & 1U) out.push_back(i);
  }
  if (out.empty()) out.push_back(from[rng() % from.size()]);
  return out;
}

}  // namespace detail

/// The instance for one seed. The point count is drawn in
/// [min_points, max_points]; the graph itself uses the seed directly.
inline VerifyInstance make_instance(std::uint64_t seed, const VerifyOptions& opt) {
  if (opt.min_points < 2 || opt.max_points < opt.min_points) {
    throw Error(ErrorCode::InvalidArgument, "need 2 <= min_points <= max_points");
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const std::size_t span = opt.max_points - opt.min_points + 1;
  const std::size_t m = opt.min_points + static_cast<std::size_t>(rng() % span);
  auto space = generate(SpaceDescriptor::random_graph(m, opt.edge_prob, seed));
  const auto all = all_indices(m);
  const auto l_nested = detail::random_subset(rng, all);
  const auto h_nested = detail::random_subset(rng, l_nested);
  const auto h_general = detail::random_subset(rng, all);
  const auto l_general = detail::random_subset(rng, all);
  return {seed, std::move(space), SubsetPair::make(h_nested, l_nested, m),
          SubsetPair::make(h_general, l_general, m)};
}

struct SuiteOutcome {
  bool pass = false;
  double residual = 0.0;  // worst signed margin; negative means violated
  std::string note;
};

namespace detail {

inline constexpr double kEltonLowerSlack = 2e-8;

inline SuiteOutcome run_chain(const VerifyInstance& in, const VerifyOptions& opt) {
  SuiteOutcome o{true, kInfinity, {}};
  for (const auto* pair : {&in.nested, &in.general}) {
    const auto c = inequality_chain(in.space, *pair, opt.chain_n_max);
    o.residual = std::min({o.residual, c.residual_chebyshev_lower + kChainTolerance,
                           c.residual_middle + kChainTolerance,
                           c.residual_chebyshev_upper + kChainTolerance,
                           kChainTolerance - c.equality_residual});
    o.pass = o.pass && c.holds;
  }
  return o;
}

inline SuiteOutcome run_duality(const VerifyInstance& in) {
  const auto all = all_indices(in.space.size());
  SuiteOutcome o;
  const auto up = q_value(in.space, {all, all});
  const auto lo = q_lower_value(in.space, {all, all});
  const double gap = std::abs(up.value - lo.value);
  o.residual = kUniquenessGap - gap;
  o.pass = gap <= kUniquenessGap;

  // Separating measures: max U^mu <= r + 1e-8 <= min U^nu + 2e-8.
  const auto elton = elton_measures(in.space, all);
  o.residual = std::min({o.residual, kUniquenessGap - elton.upper_residual,
                         kEltonLowerSlack - kUniquenessGap - elton.lower_residual});
  o.pass = o.pass && elton.upper_residual <= kUniquenessGap &&
           elton.lower_residual <= kEltonLowerSlack - kUniquenessGap;

  // Lower average number through the dual kernel: q_k = C - q_l.
  const auto dual = dual_kernel(in.space);
  for (const auto* pair : {&in.nested, &in.general}) {
    const double direct = q_lower_value(in.space, *pair).value;
    const double via = dual.constant - q_value(dual.space, *pair).value;
    const double err = std::abs(direct - via);
    o.residual = std::min(o.residual, kChainTolerance - err);
    o.pass = o.pass && err <= kChainTolerance;
  }
  return o;
}

inline SuiteOutcome run_frostman(const VerifyInstance& in) {
  const auto dual = dual_kernel(in.space);
  SuiteOutcome o{true, kInfinity, {}};
  for (const auto& H : {all_indices(in.space.size()), in.nested.H}) {
    const auto w = wiener_energy(dual.space, H);
    const auto f = frostman_check(dual.space, H, w.point, w.value, kFrostmanTolerance);
    o.residual = std::min({o.residual, f.min_potential_everywhere - (w.value - f.tolerance),
                           (w.value + f.tolerance) - f.max_potential_on_support,
                           f.tolerance - f.violating_mass});
    o.pass = o.pass && f.all();
    if (!is_global(w.certificate)) o.note = "heuristic minimizer";
  }
  return o;
}

inline SuiteOutcome run_wolf(const VerifyInstance& in) {
  const auto w = wolf_relations(in.space);
  SuiteOutcome o;
  o.pass = w.holds();
  o.residual = std::min(w.residual_i + kChainTolerance, w.residual_dual + kChainTolerance);
  if (w.equality) {
    o.note = w.invariant_found.value_or(false) ? "r = E, invariant measure found"
                                               : "r = E, no invariant measure";
  } else {
    o.note = "r < E, equality branch vacuous";
  }
  return o;
}

inline SuiteOutcome run_converse(const VerifyInstance& in) {
  SuiteOutcome o{true, kInfinity, {}};
  std::vector<std::string> notes;
  // The kernel form needs a positive-type kernel, which the dual of a
  // negative-type metric is; try it on both the metric and its dual.
  const auto dual = dual_kernel(in.space);
  for (const auto* space : {&in.space, &dual.space}) {
    for (const auto* pair : {&in.nested, &in.general}) {
      const auto kc = kernel_converse(*space, *pair);
      if (!kc.applicable) continue;
      o.pass = o.pass && kc.holds;
      o.residual =
          std::min(o.residual, kRouteTolerance - std::max(kc.residual_a, kc.residual_potential));
      notes.emplace_back(space == &in.space ? "kernel form applies" : "kernel form applies to dual");
    }
  }
  const auto mc = metric_converse(in.space);
  if (mc.applicable) {
    o.pass = o.pass && mc.holds;
    o.residual = std::min(o.residual, kRouteTolerance - std::max({mc.residual_rE, mc.residual_energy,
                                                                  mc.residual_potential}));
    notes.emplace_back("metric form applies");
  }
  if (notes.empty()) notes.emplace_back("hypotheses fail, vacuous");
  for (std::size_t i = 0; i < notes.size(); ++i) o.note += (i ? "; " : "") + notes[i];
  return o;
}

inline std::vector<double> quasi_eps_sequence() {
  std::vector<double> eps;
  for (int i = 0; i <= 30; ++i) eps.push_back(std::ldexp(1.0, -i));
  return eps;
}

inline SuiteOutcome run_quasi(const VerifyInstance& in) {
  SuiteOutcome o{true, kInfinity, {}};
  const auto all = all_indices(in.space.size());
  std::size_t feasible = 0;
  for (const auto& pair : {SubsetPair{all, all}, in.nested}) {
    const auto rep = quasi_invariant_convergence(in.space, pair, quasi_eps_sequence());
    for (const auto& e : rep.entries) {
      if (!e.feasible) continue;
      ++feasible;
      o.residual = std::min(o.residual, e.eps + kInvarianceTolerance - e.deviation);
    }
    o.pass = o.pass && rep.holds;
  }
  o.note = std::to_string(feasible) + " feasible eps";
  return o;
}

inline SuiteOutcome run_suite(Suite s, const VerifyInstance& in, const VerifyOptions& opt) {
  try {
    switch (s) {
      case Suite::chain: return run_chain(in, opt);
      case Suite::duality: return run_duality(in);
      case Suite::frostman: return run_frostman(in);
      case Suite::wolf: return run_wolf(in);
      case Suite::converse: return run_converse(in);
      case Suite::quasi: return run_quasi(in);
    }
  } catch (const Error& e) {
    return {false, -kInfinity, e.what()};
  }
  return {false, -kInfinity, "unknown suite"};
}

}  // namespace detail

struct InstanceResult {
  std::uint64_t seed = 0;
  std::size_t points = 0;
  SubsetPair nested;
  SubsetPair general;
  std::map<std::string, SuiteOutcome> outcomes;  // keyed by suite name

  bool pass() const {
    return std::all_of(outcomes.begin(), outcomes.end(),
                       [](const auto& kv) { return kv.second.pass; });
  }
};

struct VerifyResult {
  std::vector<InstanceResult> instances;  // in seed order
  std::map<std::string, std::size_t> passed;  // per suite
  std::size_t total = 0;

  bool all_pass() const {
    return std::all_of(instances.begin(), instances.end(),
                       [](const InstanceResult& r) { return r.pass(); });
  }
};

inline VerifyResult run_verify(const VerifyOptions& opt) {
  if (opt.dump_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*opt.dump_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create '" + *opt.dump_dir + "'");
  }
  VerifyResult out;
  out.total = opt.seeds;
  for (auto s : opt.suites) out.passed[std::string(to_string(s))] = 0;
  for (std::size_t i = 0; i < opt.seeds; ++i) {
    const std::uint64_t seed = opt.first_seed + i;
    InstanceResult res;
    res.seed = seed;
    std::optional<VerifyInstance> inst;
    try {
      inst = make_instance(seed, opt);
    } catch (const Error& e) {
      for (auto s : opt.suites) {
        res.outcomes[std::string(to_string(s))] = {false, -kInfinity, e.what()};
      }
      out.instances.push_back(std::move(res));
      continue;
    }
    res.points = inst->space.size();
    res.nested = inst->nested;
    res.general = inst->general;
    for (auto s : opt.suites) {
      auto o = detail::run_suite(s, *inst, opt);
      if (o.pass) ++out.passed[std::string(to_string(s))];
      res.outcomes[std::string(to_string(s))] = std::move(o);
    }
    if (!res.pass() && opt.dump_dir) {
      const auto path = std::filesystem::path(*opt.dump_dir) / ("seed-" + std::to_string(seed) + ".json");
      write_text_file(path.string(), space_to_string(inst->space, inst->nested));
    }
    out.instances.push_back(std::move(res));
  }
  return out;
}

inline nlohmann::json verify_to_json(const VerifyResult& r, const VerifyOptions& opt) {
  nlohmann::json doc;
  auto& family = doc["family"];
  family["kind"] = "random_graph";
  family["edge_prob"] = opt.edge_prob;
  family["min_points"] = opt.min_points;
  family["max_points"] = opt.max_points;
  family["first_seed"] = opt.first_seed;
  family["seeds"] = opt.seeds;
  family["chain_n_max"] = opt.chain_n_max;
  auto& suites = doc["suites"] = nlohmann::json::array();
  for (auto s : opt.suites) suites.push_back(std::string(to_string(s)));
  auto& rows = doc["instances"] = nlohmann::json::array();
  for (const auto& inst : r.instances) {
    nlohmann::json row;
    row["seed"] = inst.seed;
    row["points"] = inst.points;
    row["nested"] = {{"H", inst.nested.H}, {"L", inst.nested.L}};
    row["general"] = {{"H", inst.general.H}, {"L", inst.general.L}};
    auto& res = row["results"] = nlohmann::json::object();
    for (const auto& [name, o] : inst.outcomes) {
      res[name] = {{"pass", o.pass}, {"residual", detail::number_to_json(o.residual)}, {"note", o.note}};
    }
    row["pass"] = inst.pass();
    rows.push_back(std::move(row));
  }
  auto& summary = doc["summary"] = nlohmann::json::object();
  for (const auto& [name, n] : r.passed) summary[name] = {{"passed", n}, {"total", r.total}};
  doc["all_pass"] = r.all_pass();
  return doc;
}

/// Fixed-width table, one line per seed, then per-suite totals.
inline std::string verify_table(const VerifyResult& r, const VerifyOptions& opt) {
  std::string out = "seed      m";
  for (auto s : opt.suites) {
    std::string name(to_string(s));
    name.resize(10, ' ');
    out += "  " + name;
  }
  out += "\n";
  for (const auto& inst : r.instances) {
    std::string seed = std::to_string(inst.seed);
    seed.resize(8, ' ');
    out += seed + std::string(inst.points < 10 ? "  " : " ") + std::to_string(inst.points);
    for (auto s : opt.suites) {
      const auto it = inst.outcomes.find(std::string(to_string(s)));
      std::string cell = it != inst.outcomes.end() && it->second.pass ? "pass" : "FAIL";
      cell.resize(10, ' ');
      out += "  " + cell;
    }
    out += "\n";
  }
  for (auto s : opt.suites) {
    const std::string name(to_string(s));
    out += name + ": " + std::to_string(r.passed.at(name)) + "/" + std::to_string(r.total) + " pass\n";
  }
  return out;
}

}  // namespace rdv
