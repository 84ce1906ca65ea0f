#pragma once

// The minimax functionals
//   q(H,L)  = inf over mu on H of sup over x in L of U^mu(x)
//   q_(H,L) = sup over nu on H of inf over x in L of U^nu(x)
// as linear programs, the average interval A(H,L) = [q_(H,L), q(H,L)], the
// rendezvous number of a finite set and its two-sided separating measures.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "rdv/chebyshev.hpp"
#include "rdv/core.hpp"
#include "rdv/lp.hpp"
#include "rdv/potential.hpp"

namespace rdv {

inline constexpr double kUniquenessGap = 1e-8;
inline constexpr double kChainTolerance = 1e-8;

struct MinimaxValue {
  double value = 0.0;
  Measure measure;
  LpResiduals residuals;
};

namespace detail {

inline void check_pair(const KernelSpace& k, const SubsetPair& p) {
  if (p.H.empty() || p.L.empty()) throw Error(ErrorCode::EmptySubset, "H and L must be nonempty");
  for (auto i : p.H) {
    if (i >= k.size()) throw Error(ErrorCode::IndexOutOfRange, "H index " + std::to_string(i));
  }
  for (auto i : p.L) {
    if (i >= k.size()) throw Error(ErrorCode::IndexOutOfRange, "L index " + std::to_string(i));
  }
}

// Variables: one weight per point of H, then the bound variable.
inline MinimaxValue solve_minimax(const KernelSpace& k, const SubsetPair& p, bool upper) {
  check_pair(k, p);
  const std::size_t h = p.H.size();
  LinearProgram lp(h + 1, upper ? ObjectiveSense::minimize : ObjectiveSense::maximize);
  lp.objective[h] = 1.0;
  std::vector<double> row(h + 1, 0.0);
  for (auto x : p.L) {
    const double sign = upper ? 1.0 : -1.0;
    for (std::size_t a = 0; a < h; ++a) row[a] = sign * k(x, p.H[a]);
    row[h] = -sign;
    lp.add_row(row, RowSense::less_equal, 0.0);
  }
  std::fill(row.begin(), row.end(), 1.0);
  row[h] = 0.0;
  lp.add_row(row, RowSense::equal, 1.0);

  auto sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) {
    throw Error(ErrorCode::NumericalBreakdown,
                std::string("minimax LP ended ") + std::string(to_string(sol.status)));
  }
  std::vector<double> local(sol.primal.begin(), sol.primal.begin() + static_cast<std::ptrdiff_t>(h));
  return {sol.objective, Measure::on(k.size(), p.H, local), sol.residuals};
}

}  // namespace detail

/// q(H,L) and a measure on H whose potential never exceeds it on L.
inline MinimaxValue q_value(const KernelSpace& k, const SubsetPair& p) {
  return detail::solve_minimax(k, p, true);
}

/// q_(H,L) and a measure on H whose potential is at least it on L.
inline MinimaxValue q_lower_value(const KernelSpace& k, const SubsetPair& p) {
  return detail::solve_minimax(k, p, false);
}

struct AverageResult {
  double q_upper = 0.0;
  double q_lower = 0.0;
  ValueInterval interval = ValueInterval::point(0.0);
  Measure mu_opt;
  Measure nu_opt;
  std::optional<double> unique_point;
};

/// A(H,L) = [q_(H,L), q(H,L)]. For H = L the interval must collapse to a point.
inline AverageResult average_interval(const KernelSpace& k, const SubsetPair& p) {
  auto up = q_value(k, p);
  auto lo = q_lower_value(k, p);
  const double gap = up.value - lo.value;
  const ValueInterval interval =
      lo.value <= up.value ? ValueInterval::closed(lo.value, up.value)
      : gap >= -kUniquenessGap
          ? ValueInterval::point(0.5 * (lo.value + up.value))
          : ValueInterval::empty_with(lo.value, up.value);
  std::optional<double> unique;
  if (std::abs(gap) <= kUniquenessGap) unique = 0.5 * (lo.value + up.value);
  if (p.H == p.L && !unique) {
    throw Error(ErrorCode::UniquenessViolated,
                "q - q_ = " + std::to_string(gap) + " on H = L exceeds " +
                    std::to_string(kUniquenessGap));
  }
  return {up.value, lo.value, interval, std::move(up.measure), std::move(lo.measure), unique};
}

inline double rendezvous_number(const KernelSpace& k, const IndexSet& subset) {
  return *average_interval(k, {subset, subset}).unique_point;
}

/// Measures mu, nu on the subset with U^mu <= r <= U^nu on the subset.
struct EltonResult {
  double r = 0.0;
  Measure mu;
  Measure nu;
  double upper_residual = 0.0;  // max U^mu - r, should be <= 0
  double lower_residual = 0.0;  // r - min U^nu, should be <= 0
  bool holds = false;
};

inline EltonResult elton_measures(const KernelSpace& k, const IndexSet& subset,
                                  double tol = kUniquenessGap) {
  auto avg = average_interval(k, {subset, subset});
  const double r = *avg.unique_point;
  const auto up = profile(k, avg.mu_opt, subset);
  const auto lo = profile(k, avg.nu_opt, subset);
  EltonResult out{r, std::move(avg.mu_opt), std::move(avg.nu_opt),
                  up.interval.hi() - r, r - lo.interval.lo(), false};
  out.holds = out.upper_residual <= tol && out.lower_residual <= tol;
  return out;
}

/// Whether r is hit exactly by single-point configurations: for every w in H
/// some x in L has k(x, w) = r. Finite spaces usually fail this, which is why
/// rendezvous values are taken in the weak (convex hull) sense.
inline bool rendezvous_attained(const KernelSpace& k, const SubsetPair& p, double r,
                                double tol = kUniquenessGap) {
  for (auto w : p.H) {
    bool hit = false;
    for (auto x : p.L) {
      if (std::abs(k(x, w) - r) <= tol) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

/// M(H,L) <= q_(H,L) <= q(L,H) <= Mbar(L,H), with the middle equality forced
/// on finite spaces. Chebyshev limits enter through their finite-n bounds.
struct ChainReport {
  std::size_t n_max = 0;
  double chebyshev_lower = 0.0;  // max_{n<=N} M_n(H,L)
  double q_lower_HL = 0.0;
  double q_LH = 0.0;
  double chebyshev_upper = 0.0;  // min_{n<=N} Mbar_n(L,H)
  double residual_chebyshev_lower = 0.0;  // q_(H,L) - M_lower, >= -tol
  double residual_middle = 0.0;           // q(L,H) - q_(H,L), >= -tol
  double residual_chebyshev_upper = 0.0;  // Mbar_upper - q(L,H), >= -tol
  double equality_residual = 0.0;         // |q_(H,L) - q(L,H)|, <= tol
  ValueInterval rendezvous_bracket = ValueInterval::point(0.0);  // [max M_n, min Mbar_n] for (H,L)
  bool nested = false;
  std::optional<bool> average_nonempty;  // checked when H is inside L
  bool holds = false;
};

inline ChainReport inequality_chain(const KernelSpace& k, const SubsetPair& p, std::size_t n_max,
                                    double cap = kDefaultEnumerationCap,
                                    double tol = kChainTolerance) {
  const SubsetPair swapped{p.L, p.H};
  const auto table_hl = chebyshev_table(k, p, n_max, cap);
  const auto table_lh = chebyshev_table(k, swapped, n_max, cap);
  const auto b_hl = bounds_from_table(table_hl);
  const auto b_lh = bounds_from_table(table_lh);

  ChainReport r;
  r.n_max = n_max;
  r.chebyshev_lower = b_hl.lower;
  r.chebyshev_upper = b_lh.upper;
  r.q_lower_HL = q_lower_value(k, p).value;
  r.q_LH = q_value(k, swapped).value;
  r.residual_chebyshev_lower = r.q_lower_HL - r.chebyshev_lower;
  r.residual_middle = r.q_LH - r.q_lower_HL;
  r.residual_chebyshev_upper = r.chebyshev_upper - r.q_LH;
  r.equality_residual = std::abs(r.q_LH - r.q_lower_HL);
  r.rendezvous_bracket = b_hl.lower <= b_hl.upper + kRendezvousEmptyTolerance
                             ? ValueInterval::closed(std::min(b_hl.lower, b_hl.upper), b_hl.upper)
                             : ValueInterval::empty_with(b_hl.lower, b_hl.upper);
  r.nested = p.nested();
  r.holds = r.residual_chebyshev_lower >= -tol && r.residual_middle >= -tol &&
            r.residual_chebyshev_upper >= -tol && r.equality_residual <= tol;
  if (r.nested) {
    const double q_hl = q_value(k, p).value;
    r.average_nonempty = r.q_lower_HL <= q_hl + tol;
    r.holds = r.holds && *r.average_nonempty;
  }
  return r;
}

}  // namespace rdv
