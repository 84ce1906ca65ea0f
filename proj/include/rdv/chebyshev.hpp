#pragma once

// Exact n-th Chebyshev constants by enumeration of multisets:
//   M_n(H,L)    = max over w_1..w_n in H of min over x in L of (1/n) sum_j k(x, w_j)
//   Mbar_n(H,L) = min over w_1..w_n in H of max over x in L of (1/n) sum_j k(x, w_j)

#include <algorithm>
#include <cstddef>
#include <vector>

#include "rdv/core.hpp"

namespace rdv {

inline constexpr double kDefaultEnumerationCap = 2e6;

struct ChebyshevWitness {
  std::vector<std::size_t> multiset;  // point indices, nondecreasing
  std::size_t extremal_point = 0;     // minimizing (M_n) or maximizing (Mbar_n) x in L
};

struct ChebyshevValue {
  double value = 0.0;
  ChebyshevWitness witness;
};

/// Number of size-n multisets drawn from h items, C(h+n-1, n).
inline double multiset_count(std::size_t h, std::size_t n) {
  double count = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    count = count * static_cast<double>(h - 1 + i) / static_cast<double>(i);
  }
  return count;
}

namespace detail {

enum class ChebyshevSide { lower, upper };

inline ChebyshevValue enumerate_chebyshev(const KernelSpace& k, const SubsetPair& p, std::size_t n,
                                          ChebyshevSide side, double cap) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "Chebyshev order must be positive");
  if (p.H.empty() || p.L.empty()) throw Error(ErrorCode::EmptySubset, "H and L must be nonempty");
  for (auto i : p.H) {
    if (i >= k.size()) throw Error(ErrorCode::IndexOutOfRange, "H index");
  }
  for (auto i : p.L) {
    if (i >= k.size()) throw Error(ErrorCode::IndexOutOfRange, "L index");
  }
  const double required = multiset_count(p.H.size(), n);
  if (required > cap) throw EnumerationCapError(cap, required);

  const std::size_t h = p.H.size();
  const std::size_t l = p.L.size();
  const bool lower = side == ChebyshevSide::lower;

  // columns[a][b] = k(L[b], H[a])
  std::vector<std::vector<double>> columns(h, std::vector<double>(l));
  for (std::size_t a = 0; a < h; ++a) {
    for (std::size_t b = 0; b < l; ++b) columns[a][b] = k(p.L[b], p.H[a]);
  }

  // sums[d] holds the partial kernel sums after placing d points.
  std::vector<std::vector<double>> sums(n + 1, std::vector<double>(l, 0.0));
  std::vector<std::size_t> choice(n, 0);
  double best = lower ? -kInfinity : kInfinity;
  bool have_best = false;
  std::vector<std::size_t> best_choice;
  std::size_t best_point = 0;

  std::size_t depth = 0;
  choice[0] = 0;
  while (true) {
    // Extend the current prefix down to a full multiset.
    for (; depth < n; ++depth) {
      if (depth > 0) choice[depth] = choice[depth - 1];
      const auto& col = columns[choice[depth]];
      const auto& prev = sums[depth];
      auto& next = sums[depth + 1];
      for (std::size_t b = 0; b < l; ++b) next[b] = prev[b] + col[b];
    }

    const auto& leaf = sums[n];
    double extreme = leaf[0];
    std::size_t where = 0;
    bool pruned = false;
    for (std::size_t b = 0; b < l; ++b) {
      const double v = leaf[b];
      if (lower ? v < extreme : v > extreme) {
        extreme = v;
        where = b;
      }
      if (have_best && (lower ? extreme <= best : extreme >= best)) {
        pruned = true;
        break;
      }
    }
    if (!pruned && (!have_best || (lower ? extreme > best : extreme < best))) {
      best = extreme;
      have_best = true;
      best_choice = choice;
      best_point = p.L[where];
    }

    // Advance to the next multiset in lexicographic order.
    std::size_t d = n;
    while (d > 0 && choice[d - 1] + 1 == h) --d;
    if (d == 0) break;
    ++choice[d - 1];
    depth = d - 1;
    const auto& col = columns[choice[depth]];
    const auto& prev = sums[depth];
    auto& next = sums[depth + 1];
    for (std::size_t b = 0; b < l; ++b) next[b] = prev[b] + col[b];
    depth = d;
  }

  ChebyshevValue out;
  out.value = best / static_cast<double>(n);
  out.witness.extremal_point = best_point;
  for (auto a : best_choice) out.witness.multiset.push_back(p.H[a]);
  return out;
}

}  // namespace detail

inline ChebyshevValue chebyshev_n(const KernelSpace& k, const SubsetPair& p, std::size_t n,
                                  double cap = kDefaultEnumerationCap) {
  return detail::enumerate_chebyshev(k, p, n, detail::ChebyshevSide::lower, cap);
}

inline ChebyshevValue dual_chebyshev_n(const KernelSpace& k, const SubsetPair& p, std::size_t n,
                                       double cap = kDefaultEnumerationCap) {
  return detail::enumerate_chebyshev(k, p, n, detail::ChebyshevSide::upper, cap);
}

inline constexpr double kRendezvousEmptyTolerance = 1e-9;

/// R_n(H,L) = [M_n(H,L), Mbar_n(H,L)]; empty when the endpoints cross.
inline ValueInterval rendezvous_n(const KernelSpace& k, const SubsetPair& p, std::size_t n,
                                  double cap = kDefaultEnumerationCap) {
  const double lo = chebyshev_n(k, p, n, cap).value;
  const double hi = dual_chebyshev_n(k, p, n, cap).value;
  if (lo > hi + kRendezvousEmptyTolerance) return ValueInterval::empty_with(lo, hi);
  return ValueInterval::closed(std::min(lo, hi), hi);
}

struct ChebyshevTable {
  std::vector<std::size_t> n_values;
  std::vector<double> M;
  std::vector<double> M_bar;
  std::vector<ChebyshevWitness> lower_witnesses;
  std::vector<ChebyshevWitness> upper_witnesses;
};

inline ChebyshevTable chebyshev_table(const KernelSpace& k, const SubsetPair& p, std::size_t n_max,
                                      double cap = kDefaultEnumerationCap) {
  if (n_max == 0) throw Error(ErrorCode::InvalidArgument, "n_max must be positive");
  ChebyshevTable t;
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto lo = chebyshev_n(k, p, n, cap);
    auto hi = dual_chebyshev_n(k, p, n, cap);
    t.n_values.push_back(n);
    t.M.push_back(lo.value);
    t.M_bar.push_back(hi.value);
    t.lower_witnesses.push_back(std::move(lo.witness));
    t.upper_witnesses.push_back(std::move(hi.witness));
  }
  return t;
}

struct ChebyshevBounds {
  double lower = 0.0;  // max_{n <= n_max} M_n(H,L), a lower bound for M(H,L)
  double upper = 0.0;  // min_{n <= n_max} Mbar_n(H,L), an upper bound for Mbar(H,L)
};

inline ChebyshevBounds bounds_from_table(const ChebyshevTable& t) {
  return {*std::max_element(t.M.begin(), t.M.end()),
          *std::min_element(t.M_bar.begin(), t.M_bar.end())};
}

inline ChebyshevBounds chebyshev_limit_bounds(const KernelSpace& k, const SubsetPair& p,
                                              std::size_t n_max,
                                              double cap = kDefaultEnumerationCap) {
  return bounds_from_table(chebyshev_table(k, p, n_max, cap));
}

}  // namespace rdv
