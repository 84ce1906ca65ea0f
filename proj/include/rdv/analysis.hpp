#pragma once

// One-shot analysis of a kernel space: every quantity the library computes,
// gathered into an AnalysisReport, plus the list of hard failures
// (non-unique rendezvous value, broken inequality chain, energy routes that
// disagree).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "rdv/chebyshev.hpp"
#include "rdv/converse.hpp"
#include "rdv/core.hpp"
#include "rdv/energy.hpp"
#include "rdv/minimax.hpp"
#include "rdv/report.hpp"
#include "rdv/spaces.hpp"
#include "rdv/structure.hpp"

namespace rdv {

struct AnalyzeOptions {
  std::size_t n_max = 4;
  double enumeration_cap = kDefaultEnumerationCap;
  // Tolerances adjustable by name from the command line.
  std::map<std::string, double> tolerances = {
      {"chain", kChainTolerance},
      {"frostman", kFrostmanTolerance},
      {"invariance", kInvarianceTolerance},
      {"wolf", kChainTolerance},
  };
  QpOptions qp;

  void set_tolerance(const std::string& name, double value) {
    if (!tolerances.contains(name)) {
      throw Error(ErrorCode::InvalidArgument, "unknown tolerance '" + name + "'");
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw Error(ErrorCode::InvalidArgument, "tolerance '" + name + "' must be positive");
    }
    tolerances[name] = value;
  }
};

struct AnalysisOutcome {
  AnalysisReport report;
  std::vector<std::string> hard_failures;  // "Code: message"
};

namespace detail {

inline std::string join_indices(const IndexSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(s[i]);
  }
  return out;
}

inline std::string hard_failure(const Error& e) { return e.what(); }

}  // namespace detail

inline AnalysisOutcome analyze(const KernelSpace& k, const SubsetPair& p,
                               const AnalyzeOptions& opt = {}) {
  detail::check_pair(k, p);
  AnalysisOutcome out;
  auto& rep = out.report;
  auto& sc = rep.scalars;
  auto& ver = rep.verdicts;
  auto& par = rep.parameters;
  const auto all = all_indices(k.size());
  const double chain_tol = opt.tolerances.at("chain");
  const double frostman_tol = opt.tolerances.at("frostman");
  const double invariance_tol = opt.tolerances.at("invariance");
  const double wolf_tol = opt.tolerances.at("wolf");

  rep.space_name = k.name();
  par["points"] = std::to_string(k.size());
  par["is_metric"] = k.is_metric() ? "true" : "false";
  par["H"] = detail::join_indices(p.H);
  par["L"] = detail::join_indices(p.L);
  par["n_max"] = std::to_string(opt.n_max);
  rep.tolerances = opt.tolerances;
  rep.tolerances["uniqueness"] = kUniquenessGap;
  rep.tolerances["route"] = kRouteTolerance;
  rep.tolerances["definiteness"] = kDefinitenessThreshold;
  rep.tolerances["support"] = kSupportThreshold;

  // Rendezvous number of the whole space and the average interval on (H, L).
  try {
    const auto elton = elton_measures(k, all);
    sc["r"] = elton.r;
    sc["residual.elton_upper"] = elton.upper_residual;
    sc["residual.elton_lower"] = elton.lower_residual;
    ver["elton"] = elton.holds;
    ver["r_attained"] = rendezvous_attained(k, SubsetPair::full(k.size()), elton.r);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UniquenessViolated) throw;
    out.hard_failures.push_back(detail::hard_failure(e));
  }
  try {
    const auto avg = average_interval(k, p);
    sc["q"] = avg.q_upper;
    sc["q_lower"] = avg.q_lower;
    sc["residual.average_gap"] = avg.q_upper - avg.q_lower;
    rep.measures["q_optimal"] = avg.mu_opt.weights();
    rep.measures["q_lower_optimal"] = avg.nu_opt.weights();
    ver["average_unique"] = avg.unique_point.has_value();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UniquenessViolated) throw;
    out.hard_failures.push_back(detail::hard_failure(e));
  }

  // Chebyshev constants, stopping at the first n whose enumeration is too large.
  std::size_t reached = 0;
  for (std::size_t n = 1; n <= opt.n_max; ++n) {
    try {
      const auto lo = chebyshev_n(k, p, n, opt.enumeration_cap);
      const auto hi = dual_chebyshev_n(k, p, n, opt.enumeration_cap);
      sc["chebyshev.M_" + std::to_string(n)] = lo.value;
      sc["chebyshev.Mbar_" + std::to_string(n)] = hi.value;
      reached = n;
    } catch (const EnumerationCapError&) {
      break;
    }
  }
  par["chebyshev.n_reached"] = std::to_string(reached);
  if (reached > 0) {
    try {
      const auto chain = inequality_chain(k, p, reached, opt.enumeration_cap, chain_tol);
      sc["residual.chain_lower"] = chain.residual_chebyshev_lower;
      sc["residual.chain_middle"] = chain.residual_middle;
      sc["residual.chain_upper"] = chain.residual_chebyshev_upper;
      sc["residual.chain_equality"] = chain.equality_residual;
      ver["chain"] = chain.holds;
      if (chain.average_nonempty) ver["average_nonempty"] = *chain.average_nonempty;
      if (!chain.holds) {
        out.hard_failures.push_back("ChainViolation: inequality chain fails at tolerance " +
                                    std::to_string(chain_tol));
      }
    } catch (const EnumerationCapError&) {
      par["chain"] = "skipped: enumeration cap";
    }
  }

  // Energies.
  const auto wiener = wiener_energy(k, p.H, opt.qp);
  sc["w"] = wiener.value;
  par["certificate.w"] = std::string(to_string(wiener.certificate));
  rep.measures["equilibrium"] = wiener.point.weights();
  const auto fr = frostman_check(k, p.H, wiener.point, wiener.value, frostman_tol);
  sc["residual.frostman_A"] = wiener.value - fr.min_potential_everywhere;
  sc["residual.frostman_B"] = fr.max_potential_on_support - wiener.value;
  sc["residual.frostman_C"] = fr.violating_mass;
  ver["frostman_A"] = fr.verdict_A;
  ver["frostman_B"] = fr.verdict_B;
  ver["frostman_C"] = fr.verdict_C;

  try {
    const auto me = maximal_energy(k, opt.qp);
    sc["E"] = me.value;
    par["certificate.E"] = std::string(to_string(me.certificate));
    rep.measures["maximal_energy"] = me.measure.weights();
    if (me.route_residual) sc["residual.energy_routes"] = *me.route_residual;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DualMismatch) throw;
    out.hard_failures.push_back(detail::hard_failure(e));
  }

  // Structure.
  const auto neg = negative_type_test(k);
  ver["negative_type"] = neg.holds;
  sc["residual.negative_type"] = neg.extreme_eigenvalue;
  const auto inv = invariant_measure(k, p, invariance_tol);
  sc["invariance_gap"] = inv.gap;
  ver["invariant_found"] = inv.found;
  if (inv.found) {
    sc["invariant_constant"] = *inv.constant;
    sc["residual.invariant"] = inv.residual;
    rep.measures["invariant"] = inv.measure->weights();
    if (inv.average_consistent) ver["invariant_average"] = *inv.average_consistent;
  }

  // Relations between r, E and the dual kernel (metric spaces only).
  if (k.is_metric() && out.hard_failures.empty()) {
    const auto wolf = wolf_relations(k, wolf_tol, opt.qp);
    ver["wolf_i"] = wolf.verdict_i;
    sc["residual.wolf_i"] = wolf.residual_i;
    if (wolf.equality) {
      ver["wolf_ii"] = wolf.invariant_found.value_or(false);
      sc["residual.wolf_ii"] = wolf.invariant_gap;
      par["wolf_ii"] = "checked";
    } else {
      par["wolf_ii"] = "vacuous";
    }
    ver["wolf_dual"] = wolf.verdict_dual;
    sc["residual.wolf_dual"] = wolf.residual_dual;
    sc["dual.r"] = wolf.r_dual;
    sc["dual.w"] = wolf.w_dual;
    sc["diameter"] = wolf.diameter;
  }

  // The converse checks reuse r and A(H,L), so they only run on a sound base.
  if (out.hard_failures.empty()) {
    const auto kc = kernel_converse(k, p, opt.qp);
    ver["converse_kernel_applicable"] = kc.applicable;
    if (kc.applicable) {
      ver["converse_kernel"] = kc.holds;
      sc["residual.converse_kernel"] = std::max(kc.residual_a, kc.residual_potential);
    } else {
      par["converse_kernel"] = kc.reason;
    }
    const auto mc = metric_converse(k, opt.qp);
    ver["converse_metric_applicable"] = mc.applicable;
    if (mc.applicable) {
      ver["converse_metric"] = mc.holds;
      sc["residual.converse_metric"] =
          std::max({mc.residual_rE, mc.residual_energy, mc.residual_potential});
    } else {
      par["converse_metric"] = mc.reason;
    }
  }
  return out;
}

}  // namespace rdv
