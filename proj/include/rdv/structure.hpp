#pragma once

// Invariant and quasi-invariant measures (potential constant, or nearly
// constant, on L) and the spectral negative-type test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rdv/core.hpp"
#include "rdv/lp.hpp"
#include "rdv/minimax.hpp"
#include "rdv/potential.hpp"
#include "rdv/spectral.hpp"

namespace rdv {

inline constexpr double kInvarianceTolerance = 1e-8;

struct GapResult {
  double gap = 0.0;  // sup_L U^mu - inf_L U^mu
  Measure measure;
};

/// Smallest oscillation of U^mu over L among measures mu on H, i.e. the least
/// eps for which an eps-quasi-invariant measure exists.
inline GapResult min_invariance_gap(const KernelSpace& k, const SubsetPair& p) {
  detail::check_pair(k, p);
  const std::size_t h = p.H.size();
  // Variables: weights on H, upper envelope t, lower envelope s.
  LinearProgram lp(h + 2);
  lp.objective[h] = 1.0;
  lp.objective[h + 1] = -1.0;
  std::vector<double> row(h + 2, 0.0);
  for (auto x : p.L) {
    for (std::size_t a = 0; a < h; ++a) row[a] = k(x, p.H[a]);
    row[h] = -1.0;
    row[h + 1] = 0.0;
    lp.add_row(row, RowSense::less_equal, 0.0);
    for (std::size_t a = 0; a < h; ++a) row[a] = -k(x, p.H[a]);
    row[h] = 0.0;
    row[h + 1] = 1.0;
    lp.add_row(row, RowSense::less_equal, 0.0);
  }
  std::fill(row.begin(), row.end(), 1.0);
  row[h] = 0.0;
  row[h + 1] = 0.0;
  lp.add_row(row, RowSense::equal, 1.0);

  const auto sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) {
    throw Error(ErrorCode::NumericalBreakdown,
                std::string("invariance LP ended ") + std::string(to_string(sol.status)));
  }
  std::vector<double> local(sol.primal.begin(), sol.primal.begin() + static_cast<std::ptrdiff_t>(h));
  auto mu = Measure::on(k.size(), p.H, local);
  // Report the oscillation of the returned measure itself.
  const auto prof = profile(k, mu, p.L);
  return {std::max(0.0, prof.interval.hi() - prof.interval.lo()), std::move(mu)};
}

struct InvarianceResult {
  bool found = false;
  std::optional<Measure> measure;
  std::optional<double> constant;  // common value of U^mu on L
  double residual = 0.0;           // max over L of |U^mu - constant|
  double gap = 0.0;                // oscillation of the best measure
  // When found and H is inside L: whether A(H,L) collapses to {constant}.
  std::optional<bool> average_consistent;
};

inline InvarianceResult invariant_measure(const KernelSpace& k, const SubsetPair& p,
                                          double tol = kInvarianceTolerance) {
  auto best = min_invariance_gap(k, p);
  InvarianceResult out;
  out.gap = best.gap;
  if (best.gap > tol) return out;
  const auto prof = profile(k, best.measure, p.L);
  const double c = 0.5 * (prof.interval.lo() + prof.interval.hi());
  out.found = true;
  out.constant = c;
  out.residual = 0.5 * (prof.interval.hi() - prof.interval.lo());
  out.measure = std::move(best.measure);
  if (p.nested()) {
    const SubsetPair pair = p;
    auto up = q_value(k, pair).value;
    auto lo = q_lower_value(k, pair).value;
    out.average_consistent = std::abs(up - c) <= 1e-7 && std::abs(lo - c) <= 1e-7;
  }
  return out;
}

struct QuasiInvarianceEntry {
  double eps = 0.0;
  bool feasible = false;
  double rho = 0.0;        // U^mu at the first point of L
  double deviation = 0.0;  // max over a in A(H,L) of |rho - a|
  bool within = false;     // deviation <= eps + tol
};

struct QuasiInvarianceReport {
  double min_gap = 0.0;
  Measure measure;
  double a_lower = 0.0;  // q_(H,L)
  double a_upper = 0.0;  // q(H,L)
  bool average_nonempty = false;
  std::vector<QuasiInvarianceEntry> entries;
  bool holds = false;
};

/// For each eps, an eps-quasi-invariant measure (when one exists) pins every
/// average number to within eps of any value its potential takes on L.
inline QuasiInvarianceReport quasi_invariant_convergence(const KernelSpace& k, const SubsetPair& p,
                                                         const std::vector<double>& eps_sequence,
                                                         double tol = kInvarianceTolerance) {
  for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
    if (!(eps_sequence[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    if (i > 0 && eps_sequence[i] >= eps_sequence[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "eps sequence must be decreasing");
    }
  }
  auto best = min_invariance_gap(k, p);
  const double a_up = q_value(k, p).value;
  const double a_lo = q_lower_value(k, p).value;
  const double rho = potential_at(k, best.measure, p.L.front());

  QuasiInvarianceReport out{best.gap, std::move(best.measure), a_lo, a_up,
                            a_lo <= a_up + kUniquenessGap, {}, true};
  for (double eps : eps_sequence) {
    QuasiInvarianceEntry e;
    e.eps = eps;
    e.feasible = best.gap <= eps;
    if (e.feasible) {
      e.rho = rho;
      e.deviation = std::max(std::abs(rho - a_lo), std::abs(rho - a_up));
      e.within = e.deviation <= eps + tol;
      out.holds = out.holds && e.within;
    }
    out.entries.push_back(e);
  }
  return out;
}

struct NegativeTypeCertificate {
  bool holds = false;
  double extreme_eigenvalue = 0.0;  // largest eigenvalue of the centered kernel
  std::optional<std::vector<double>> violating_vector;  // unit, sum-zero, c'Kc > 0
};

/// sum_ij c_i c_j k(i,j) <= 0 for every real c with sum c = 0, decided on the
/// spectrum of the centered kernel matrix.
inline NegativeTypeCertificate negative_type_test(const Matrix& kernel) {
  const auto spec = centered_spectrum(kernel);
  NegativeTypeCertificate cert;
  cert.extreme_eigenvalue = spec.largest;
  cert.holds = spec.largest <= kDefinitenessThreshold;
  if (!cert.holds) cert.violating_vector = spec.largest_vector;
  return cert;
}

inline NegativeTypeCertificate negative_type_test(const KernelSpace& k) {
  return negative_type_test(k.kernel());
}

/// Positive-definite form on sum-zero vectors (the dual-kernel side of the
/// negative-type condition).
inline bool positive_type_on_sum_zero(const Matrix& kernel) {
  return centered_spectrum(kernel).smallest >= -kDefinitenessThreshold;
}

}  // namespace rdv
