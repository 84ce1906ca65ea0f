#pragma once

// Converse direction: a positive-type kernel (or a negative-type metric) with
// an invariant measure has its average number equal to the Wiener energy
// (respectively r = E, attained by the invariant measure).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "rdv/core.hpp"
#include "rdv/energy.hpp"
#include "rdv/minimax.hpp"
#include "rdv/potential.hpp"
#include "rdv/structure.hpp"

namespace rdv {

struct KernelConverse {
  bool applicable = false;
  std::string reason;  // first failed hypothesis when not applicable
  double a = 0.0;      // the average number
  double w = 0.0;      // w(H)
  double residual_a = 0.0;          // |a - w|
  double residual_potential = 0.0;  // max over L of |U^mu0 - w|
  bool holds = false;
  std::optional<Measure> invariant;
};

struct MetricConverse {
  bool applicable = false;
  std::string reason;
  double r = 0.0;
  double E = 0.0;
  double invariant_energy = 0.0;  // W(mu0)
  double residual_rE = 0.0;       // |r - E|
  double residual_energy = 0.0;   // |W(mu0) - E|
  double residual_potential = 0.0;  // max |U^mu0 - r|
  bool holds = false;
  std::optional<Measure> invariant;
};

struct ConverseReport {
  KernelConverse kernel_form;
  MetricConverse metric_form;
};

inline KernelConverse kernel_converse(const KernelSpace& k, const SubsetPair& p,
                                      const QpOptions& opt = {}) {
  KernelConverse out;
  if (!p.nested()) {
    out.reason = "H is not contained in L";
    return out;
  }
  if (!positive_type_on_sum_zero(restrict_kernel(k, p.H, p.H))) {
    out.reason = "kernel is not positive definite on sum-zero measures over H";
    return out;
  }
  auto inv = invariant_measure(k, p);
  if (!inv.found) {
    out.reason = "no invariant measure on L";
    return out;
  }
  auto avg = average_interval(k, p);
  if (!avg.unique_point) {
    out.reason = "average interval is not a single point";
    return out;
  }
  out.applicable = true;
  out.a = *avg.unique_point;
  out.w = wiener_energy(k, p.H, opt).value;
  out.residual_a = std::abs(out.a - out.w);
  const auto prof = profile(k, *inv.measure, p.L);
  out.residual_potential = std::max(std::abs(prof.interval.hi() - out.w),
                                    std::abs(prof.interval.lo() - out.w));
  out.holds = out.residual_a <= kRouteTolerance && out.residual_potential <= kRouteTolerance;
  out.invariant = std::move(inv.measure);
  return out;
}

inline MetricConverse metric_converse(const KernelSpace& k, const QpOptions& opt = {}) {
  MetricConverse out;
  if (!k.is_metric()) {
    out.reason = "kernel is not a metric";
    return out;
  }
  if (!negative_type_test(k).holds) {
    out.reason = "metric is not of negative type";
    return out;
  }
  const auto all = all_indices(k.size());
  auto inv = invariant_measure(k, {all, all});
  if (!inv.found) {
    out.reason = "no invariant measure";
    return out;
  }
  out.applicable = true;
  out.r = rendezvous_number(k, all);
  out.E = maximal_energy(k, opt).value;
  out.invariant_energy = energy(k, *inv.measure);
  out.residual_rE = std::abs(out.r - out.E);
  out.residual_energy = std::abs(out.invariant_energy - out.E);
  const auto prof = profile(k, *inv.measure, all);
  out.residual_potential = std::max(std::abs(prof.interval.hi() - out.r),
                                    std::abs(prof.interval.lo() - out.r));
  out.holds = out.residual_rE <= kRouteTolerance && out.residual_energy <= kRouteTolerance &&
              out.residual_potential <= kRouteTolerance;
  out.invariant = std::move(inv.measure);
  return out;
}

inline ConverseReport converse_check(const KernelSpace& k, const SubsetPair& p,
                                     const QpOptions& opt = {}) {
  return {kernel_converse(k, p, opt), metric_converse(k, opt)};
}

}  // namespace rdv
