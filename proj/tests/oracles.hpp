#pragma once

// Independent reference computations for the unit and acceptance tests. None
// of these call into the solvers they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "rdv/core.hpp"

namespace rdv::oracle {

inline KernelSpace t2() { return validate_kernel({{0, 1}, {1, 0}}, true); }
inline KernelSpace k3() { return validate_kernel({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, true); }
inline KernelSpace g3() { return validate_kernel({{0, .5, 1}, {.5, 0, .5}, {1, .5, 0}}, true); }

/// Visits every point of the simplex grid {w : w_i = k_i / steps, sum k_i = steps}.
inline void for_each_grid_point(std::size_t dims, std::size_t steps,
                                const std::function<void(const std::vector<double>&)>& visit) {
  std::vector<std::size_t> k(dims, 0);
  std::vector<double> w(dims, 0.0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == dims) {
      k[i] = left;
      for (std::size_t j = 0; j < dims; ++j) w[j] = static_cast<double>(k[j]) / static_cast<double>(steps);
      visit(w);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      k[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, steps);
}

inline double grid_potential(const KernelSpace& k, const IndexSet& H, const std::vector<double>& w,
                             std::size_t x) {
  double s = 0.0;
  for (std::size_t a = 0; a < H.size(); ++a) s += k(x, H[a]) * w[a];
  return s;
}

/// min over the grid of max over L of U^mu (an upper estimate of q(H,L)).
inline double grid_q(const KernelSpace& k, const IndexSet& H, const IndexSet& L, std::size_t steps) {
  double best = std::numeric_limits<double>::infinity();
  for_each_grid_point(H.size(), steps, [&](const std::vector<double>& w) {
    double worst = -std::numeric_limits<double>::infinity();
    for (auto x : L) worst = std::max(worst, grid_potential(k, H, w, x));
    best = std::min(best, worst);
  });
  return best;
}

/// max over the grid of min over L of U^nu (a lower estimate of q_(H,L)).
inline double grid_q_lower(const KernelSpace& k, const IndexSet& H, const IndexSet& L,
                           std::size_t steps) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_grid_point(H.size(), steps, [&](const std::vector<double>& w) {
    double worst = std::numeric_limits<double>::infinity();
    for (auto x : L) worst = std::min(worst, grid_potential(k, H, w, x));
    best = std::max(best, worst);
  });
  return best;
}

inline double grid_energy(const KernelSpace& k, const IndexSet& H, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t a = 0; a < H.size(); ++a) {
    for (std::size_t b = 0; b < H.size(); ++b) s += w[a] * w[b] * k(H[a], H[b]);
  }
  return s;
}

inline double grid_min_energy(const KernelSpace& k, const IndexSet& H, std::size_t steps) {
  double best = std::numeric_limits<double>::infinity();
  for_each_grid_point(H.size(), steps,
                      [&](const std::vector<double>& w) { best = std::min(best, grid_energy(k, H, w)); });
  return best;
}

inline double grid_max_energy(const KernelSpace& k, const IndexSet& H, std::size_t steps) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_grid_point(H.size(), steps,
                      [&](const std::vector<double>& w) { best = std::max(best, grid_energy(k, H, w)); });
  return best;
}

/// min over the grid of the oscillation of U^mu over L.
inline double grid_min_gap(const KernelSpace& k, const IndexSet& H, const IndexSet& L,
                           std::size_t steps) {
  double best = std::numeric_limits<double>::infinity();
  for_each_grid_point(H.size(), steps, [&](const std::vector<double>& w) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (auto x : L) {
      const double u = grid_potential(k, H, w, x);
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
    best = std::min(best, hi - lo);
  });
  return best;
}

/// Chebyshev constants by ordered tuples in H^n (no multiset reduction).
inline double tuple_chebyshev(const KernelSpace& k, const IndexSet& H, const IndexSet& L, std::size_t n,
                              bool lower) {
  std::vector<std::size_t> idx(n, 0);
  double best = lower ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  while (true) {
    double inner = lower ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    for (auto x : L) {
      double s = 0.0;
      for (auto j : idx) s += k(x, H[j]);
      s /= static_cast<double>(n);
      inner = lower ? std::min(inner, s) : std::max(inner, s);
    }
    best = lower ? std::max(best, inner) : std::min(best, inner);
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == H.size()) idx[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

/// Eigenvalues (ascending) of the centered matrix P K P.
inline Eigen::VectorXd centered_eigenvalues(const Matrix& k) {
  const auto m = static_cast<Eigen::Index>(k.rows());
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      a(i, j) = k(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  const Eigen::MatrixXd p =
      Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(m));
  const Eigen::MatrixXd c = p * a * p;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c + c.transpose()));
  return es.eigenvalues();
}

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t panels) {
  if (panels % 2 == 1) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace rdv::oracle
