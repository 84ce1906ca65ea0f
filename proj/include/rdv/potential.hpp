#pragma once

// Potentials U^mu(x) = sum_y k(x,y) mu(y), energies W(mu) = mu' K mu and the
// extremal values of a potential over an evaluation set.

#include <cstddef>
#include <span>
#include <vector>

#include "rdv/core.hpp"

namespace rdv {

inline constexpr double kTieTolerance = 1e-9;

namespace detail {

inline constexpr std::size_t kPairwiseThreshold = 1024;

// Ascending-index dot product; pairwise summation above the threshold so that
// long sums keep a deterministic O(log n) error growth.
inline double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n <= kPairwiseThreshold) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  }
  const std::size_t half = n / 2;
  return dot(a.first(half), b.first(half)) + dot(a.subspan(half), b.subspan(half));
}

inline void check_measure(const KernelSpace& k, const Measure& mu) {
  if (mu.size() != k.size()) {
    throw Error(ErrorCode::DimensionMismatch, "measure has " + std::to_string(mu.size()) +
                                                  " weights for " + std::to_string(k.size()) +
                                                  " points");
  }
}

}  // namespace detail

inline double potential_at(const KernelSpace& k, const Measure& mu, std::size_t x) {
  detail::check_measure(k, mu);
  if (x >= k.size()) throw Error(ErrorCode::IndexOutOfRange, "point " + std::to_string(x));
  return detail::dot(k.kernel().row(x), mu.weights());
}

/// U^mu at every point of the space.
inline std::vector<double> potentials(const KernelSpace& k, const Measure& mu) {
  detail::check_measure(k, mu);
  std::vector<double> out(k.size());
  for (std::size_t x = 0; x < k.size(); ++x) out[x] = detail::dot(k.kernel().row(x), mu.weights());
  return out;
}

inline double energy(const KernelSpace& k, const Measure& mu) {
  const auto u = potentials(k, mu);
  return detail::dot(u, mu.weights());
}

/// U^mu restricted to L with its hull A(mu, L) = [inf_L U^mu, sup_L U^mu].
struct PotentialProfile {
  std::vector<double> values;  // in L's order
  ValueInterval interval = ValueInterval::point(0.0);
  IndexSet argmin;  // point indices (not positions in L)
  IndexSet argmax;
};

inline PotentialProfile profile(const KernelSpace& k, const Measure& mu, const IndexSet& L) {
  if (L.empty()) throw Error(ErrorCode::EmptySubset, "evaluation set L is empty");
  PotentialProfile p;
  p.values.reserve(L.size());
  for (auto x : L) p.values.push_back(potential_at(k, mu, x));
  p.interval = interval_hull(p.values);
  for (std::size_t a = 0; a < L.size(); ++a) {
    if (p.values[a] <= p.interval.lo() + kTieTolerance) p.argmin.push_back(L[a]);
    if (p.values[a] >= p.interval.hi() - kTieTolerance) p.argmax.push_back(L[a]);
  }
  return p;
}

}  // namespace rdv
