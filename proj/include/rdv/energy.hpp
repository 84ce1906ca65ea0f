#pragma once

// Wiener energy w(H) = inf W(mu), maximal energy E = sup W(mu), equilibrium
// measure checks, and the relations between r, E and w.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "rdv/core.hpp"
#include "rdv/minimax.hpp"
#include "rdv/potential.hpp"
#include "rdv/quadratic.hpp"
#include "rdv/structure.hpp"

namespace rdv {

inline constexpr double kFrostmanTolerance = 1e-6;
inline constexpr double kRouteTolerance = 1e-7;

inline SimplexQpResult wiener_energy(const KernelSpace& k, const IndexSet& H,
                                     const QpOptions& opt = {}) {
  return minimize_quadratic_on_simplex(k, H, opt);
}

/// Equilibrium conditions for a candidate minimizer mu of the energy on H:
///   (A) U^mu >= w everywhere on H,
///   (B) U^mu <= w on the support of mu,
///   (C) U^mu = w up to a set of mu-mass at most tol.
struct FrostmanReport {
  double w_value = 0.0;
  double energy = 0.0;  // W(mu)
  double min_potential_everywhere = 0.0;
  double max_potential_on_support = 0.0;
  double violating_mass = 0.0;
  bool verdict_A = false;
  bool verdict_B = false;
  bool verdict_C = false;
  double tolerance = kFrostmanTolerance;

  bool all() const { return verdict_A && verdict_B && verdict_C; }
};

inline FrostmanReport frostman_check(const KernelSpace& k, const IndexSet& H, const Measure& mu,
                                     double w, double tol = kFrostmanTolerance) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (!is_subset(mu.active_support(0.0), H)) {
    throw Error(ErrorCode::InvalidMeasure, "measure is not supported in H");
  }
  const auto u = potentials(k, mu);
  FrostmanReport r;
  r.w_value = w;
  r.energy = energy(k, mu);
  r.tolerance = tol;
  r.min_potential_everywhere = kInfinity;
  for (auto x : H) r.min_potential_everywhere = std::min(r.min_potential_everywhere, u[x]);
  r.max_potential_on_support = -kInfinity;
  for (auto x : mu.active_support(kSupportThreshold)) {
    r.max_potential_on_support = std::max(r.max_potential_on_support, u[x]);
  }
  for (std::size_t x = 0; x < u.size(); ++x) {
    if (std::abs(u[x] - w) > tol) r.violating_mass += mu[x];
  }
  r.verdict_A = r.min_potential_everywhere >= w - tol;
  r.verdict_B = r.max_potential_on_support <= w + tol;
  r.verdict_C = r.violating_mass <= tol;
  return r;
}

/// Same check with w(H) computed here, at the default tolerance.
inline FrostmanReport frostman_check(const KernelSpace& k, const IndexSet& H, const Measure& mu) {
  return frostman_check(k, H, mu, wiener_energy(k, H).value);
}

struct MaximalEnergyResult {
  double value = 0.0;
  Measure measure;
  QpCertificate certificate = QpCertificate::heuristic_bound;
  std::optional<bool> negative_type;     // metric kernels only
  std::optional<double> dual_route;      // diam - w of the dual kernel
  std::optional<double> route_residual;  // |value - dual_route|
};

inline MaximalEnergyResult maximal_energy(const KernelSpace& k, const QpOptions& opt = {}) {
  const auto all = all_indices(k.size());
  auto direct = maximize_quadratic_on_simplex(k, all, opt);
  MaximalEnergyResult out{direct.value, std::move(direct.point), direct.certificate, {}, {}, {}};
  if (k.is_metric()) {
    out.negative_type = negative_type_test(k).holds;
    if (*out.negative_type) {
      const auto dual = dual_kernel(k);
      const auto w = minimize_quadratic_on_simplex(dual.space, all, opt);
      out.dual_route = dual.constant - w.value;
      out.route_residual = std::abs(out.value - *out.dual_route);
      if (is_global(out.certificate) && is_global(w.certificate) &&
          *out.route_residual > kRouteTolerance) {
        throw Error(ErrorCode::DualMismatch,
                    "maximal energy " + std::to_string(out.value) + " vs dual route " +
                        std::to_string(*out.dual_route));
      }
    }
  }
  return out;
}

/// r <= E for metrics, with an invariant measure whenever they coincide; and
/// r >= w for the dual kernel, with an invariant measure whenever those
/// coincide (checked along the chain w <= W(mu) <= Q(mu) = r = w).
struct WolfReport {
  double r = 0.0;
  double E = 0.0;
  QpCertificate E_certificate = QpCertificate::heuristic_bound;
  double diameter = 0.0;
  bool verdict_i = false;  // r <= E + tol
  double residual_i = 0.0;  // E - r
  bool equality = false;    // |r - E| <= 1e-7
  std::optional<bool> invariant_found;  // only when equality
  std::optional<Measure> invariant;
  double invariant_gap = 0.0;

  // Dual kernel l = diam - d.
  double r_dual = 0.0;
  double w_dual = 0.0;
  bool verdict_dual = false;   // r_l >= w_l - tol
  double residual_dual = 0.0;  // r_l - w_l
  bool dual_equality = false;
  std::optional<bool> dual_invariant_found;
  std::optional<double> chain_energy_residual;  // |W_l(mu_q) - w_l| when r_l = w_l

  bool holds() const {
    bool ok = verdict_i && verdict_dual;
    if (equality) ok = ok && invariant_found.value_or(false);
    if (dual_equality) {
      ok = ok && dual_invariant_found.value_or(false) &&
           chain_energy_residual.value_or(kInfinity) <= kRouteTolerance;
    }
    return ok;
  }
};

inline WolfReport wolf_relations(const KernelSpace& k, double tol = kChainTolerance,
                                 const QpOptions& opt = {}) {
  if (!k.is_metric()) {
    throw Error(ErrorCode::InvalidArgument, "r <= E comparison needs a metric kernel");
  }
  const auto all = all_indices(k.size());
  const SubsetPair full{all, all};
  WolfReport w;
  w.r = rendezvous_number(k, all);
  auto e = maximal_energy(k, opt);
  w.E = e.value;
  w.E_certificate = e.certificate;
  w.diameter = k.max_entry();
  w.residual_i = w.E - w.r;
  w.verdict_i = w.r <= w.E + tol;
  w.equality = std::abs(w.r - w.E) <= kRouteTolerance;
  if (w.equality) {
    auto inv = invariant_measure(k, full);
    w.invariant_found = inv.found;
    w.invariant_gap = inv.gap;
    w.invariant = std::move(inv.measure);
  }

  const auto dual = dual_kernel(k);
  const auto avg = average_interval(dual.space, full);
  w.r_dual = *avg.unique_point;
  w.w_dual = wiener_energy(dual.space, all, opt).value;
  w.residual_dual = w.r_dual - w.w_dual;
  w.verdict_dual = w.residual_dual >= -tol;
  w.dual_equality = std::abs(w.residual_dual) <= kRouteTolerance;
  if (w.dual_equality) {
    w.chain_energy_residual = std::abs(energy(dual.space, avg.mu_opt) - w.w_dual);
    w.dual_invariant_found = invariant_measure(dual.space, full).found;
  }
  return w;
}

}  // namespace rdv
