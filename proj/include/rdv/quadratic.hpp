#pragma once

// Optimization of the energy mu' K mu over probability measures supported in
// an index set H. Three routes, chosen per instance:
//   * the form is convex (for minimization) or concave (for maximization) on
//     the sum-zero subspace: away-step conditional gradient, then an exact
//     KKT polish on the active face;
//   * |H| <= 14: exhaustive enumeration of supports, solving the KKT system
//     K_S mu = lambda 1, sum mu = 1 on each face;
//   * otherwise: multistart conditional gradient, which only bounds the
//     optimum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rdv/core.hpp"
#include "rdv/potential.hpp"
#include "rdv/spectral.hpp"

namespace rdv {

// entry_bound: mu'K mu is an average of entries of K on H x H, so a point
// reaching the smallest (largest) entry is a global minimizer (maximizer).
enum class QpCertificate {
  global_convex,
  global_concave_max,
  enumerated_exact,
  entry_bound,
  heuristic_bound
};

inline std::string_view to_string(QpCertificate c) {
  switch (c) {
    case QpCertificate::global_convex: return "global_convex";
    case QpCertificate::global_concave_max: return "global_concave_max";
    case QpCertificate::enumerated_exact: return "enumerated_exact";
    case QpCertificate::entry_bound: return "entry_bound";
    case QpCertificate::heuristic_bound: return "heuristic_bound";
  }
  return "unknown";
}

/// True when the certificate proves global optimality.
inline bool is_global(QpCertificate c) { return c != QpCertificate::heuristic_bound; }

struct SimplexQpResult {
  double value = 0.0;
  Measure point;
  QpCertificate certificate = QpCertificate::heuristic_bound;
  std::size_t skipped_supports = 0;  // rank-deficient KKT systems during enumeration
  std::size_t iterations = 0;        // conditional-gradient iterations
};

struct QpOptions {
  std::size_t enumeration_limit = 14;
  double gap_tolerance = 1e-10;
  std::size_t max_iterations = 100000;
  std::size_t starts = 32;
  std::uint64_t seed = 0x5eedULL;
};

namespace detail {

// Minimizes sign * x'Qx over the unit simplex in R^h.
class SimplexQuadratic {
 public:
  SimplexQuadratic(Matrix q, double sign) : q_(std::move(q)), sign_(sign), h_(q_.rows()) {}

  std::size_t size() const { return h_; }

  double value(const std::vector<double>& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < h_; ++i) {
      if (x[i] == 0.0) continue;
      double r = 0.0;
      const auto row = q_.row(i);
      for (std::size_t j = 0; j < h_; ++j) r += row[j] * x[j];
      s += x[i] * r;
    }
    return sign_ * s;
  }

  std::vector<double> gradient_half(const std::vector<double>& x) const {
    std::vector<double> g(h_, 0.0);
    for (std::size_t i = 0; i < h_; ++i) {
      double r = 0.0;
      const auto row = q_.row(i);
      for (std::size_t j = 0; j < h_; ++j) r += row[j] * x[j];
      g[i] = sign_ * r;
    }
    return g;
  }

  // max over the support of g minus min over all of g, where g = sign * Qx.
  double stationarity_gap(const std::vector<double>& x) const {
    const auto g = gradient_half(x);
    double lo = kInfinity, hi = -kInfinity;
    for (std::size_t i = 0; i < h_; ++i) {
      lo = std::min(lo, g[i]);
      if (x[i] > 0.0) hi = std::max(hi, g[i]);
    }
    return hi - lo;
  }

  struct Run {
    std::vector<double> x;
    std::size_t iterations = 0;
  };

  Run conditional_gradient(std::vector<double> x, double tol, std::size_t max_iter) const {
    auto g = gradient_half(x);
    std::size_t it = 0;
    for (; it < max_iter; ++it) {
      if (it > 0 && it % 512 == 0) g = gradient_half(x);
      double w = 0.0;
      for (std::size_t i = 0; i < h_; ++i) w += x[i] * g[i];
      std::size_t s = 0, a = h_;
      for (std::size_t i = 0; i < h_; ++i) {
        if (g[i] < g[s]) s = i;
        if (x[i] > 0.0 && (a == h_ || g[i] > g[a])) a = i;
      }
      const double fw_gap = w - g[s];
      const double away_gap = g[a] - w;
      if (g[a] - g[s] <= tol) break;

      if (fw_gap >= away_gap) {
        const double slope = g[s] - w;
        const double curv = sign_ * q_(s, s) - 2.0 * g[s] + w;
        double gamma = 1.0;
        if (curv > 0.0) gamma = std::min(1.0, -slope / curv);
        if (gamma <= 0.0) break;
        for (std::size_t i = 0; i < h_; ++i) {
          x[i] *= 1.0 - gamma;
          g[i] = (1.0 - gamma) * g[i] + gamma * sign_ * q_(i, s);
        }
        x[s] += gamma;
      } else {
        const double xa = x[a];
        const double gamma_max = xa / (1.0 - xa);
        const double slope = w - g[a];
        const double curv = w - 2.0 * g[a] + sign_ * q_(a, a);
        double gamma = gamma_max;
        if (curv > 0.0) gamma = std::min(gamma_max, -slope / curv);
        if (gamma <= 0.0) break;
        for (std::size_t i = 0; i < h_; ++i) {
          x[i] *= 1.0 + gamma;
          g[i] = (1.0 + gamma) * g[i] - gamma * sign_ * q_(i, a);
        }
        x[a] -= gamma;
        if (gamma == gamma_max || x[a] < 1e-16) x[a] = 0.0;
      }
    }
    normalize(x);
    return {std::move(x), it};
  }

  // Stationary point of the face spanned by `support`, or nothing when the
  // KKT system is singular or the solution leaves the simplex.
  std::optional<std::vector<double>> face_stationary_point(const std::vector<std::size_t>& support,
                                                           bool* singular = nullptr) const {
    const auto s = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd kkt(s + 1, s + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
    for (Eigen::Index a = 0; a < s; ++a) {
      for (Eigen::Index b = 0; b < s; ++b) {
        kkt(a, b) = q_(support[static_cast<std::size_t>(a)], support[static_cast<std::size_t>(b)]);
      }
      kkt(a, s) = 1.0;
      kkt(s, a) = 1.0;
    }
    kkt(s, s) = 0.0;
    rhs(s) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (lu.rank() < s + 1) {
      if (singular) *singular = true;
      return std::nullopt;
    }
    const Eigen::VectorXd sol = lu.solve(rhs);
    std::vector<double> x(h_, 0.0);
    for (Eigen::Index a = 0; a < s; ++a) {
      const double v = sol(a);
      if (!std::isfinite(v) || v < -1e-12) return std::nullopt;
      x[support[static_cast<std::size_t>(a)]] = std::max(v, 0.0);
    }
    normalize(x);
    return x;
  }

  static void normalize(std::vector<double>& x) {
    double t = 0.0;
    for (double v : x) t += v;
    if (t > 0.0) {
      for (double& v : x) v /= t;
    }
  }

  // Replaces x by the exact stationary point of its active face when that
  // point is feasible and no less stationary.
  std::vector<double> polish(std::vector<double> x) const {
    double current = stationarity_gap(x);
    for (double threshold : {1e-12, 1e-9, 1e-6}) {
      std::vector<std::size_t> support;
      for (std::size_t i = 0; i < h_; ++i) {
        if (x[i] > threshold) support.push_back(i);
      }
      if (support.empty()) continue;
      auto candidate = face_stationary_point(support);
      if (!candidate) continue;
      const double gap = stationarity_gap(*candidate);
      if (gap <= current + 1e-15 && value(*candidate) <= value(x) + 1e-12) {
        return *candidate;
      }
    }
    return x;
  }

 private:
  Matrix q_;
  double sign_;
  std::size_t h_;
};

inline bool lexicographically_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline SimplexQpResult optimize_on_simplex(const KernelSpace& k, const IndexSet& H, double sign,
                                           const QpOptions& opt) {
  if (H.empty()) throw Error(ErrorCode::EmptySubset, "support set H is empty");
  for (auto i : H) {
    if (i >= k.size()) throw Error(ErrorCode::IndexOutOfRange, "H index");
  }
  const std::size_t h = H.size();
  Matrix q = restrict_kernel(k, H, H);
  const double entry_extreme = sign > 0.0 ? q.min_entry() : q.max_entry();
  const double entry_scale = std::max(1.0, std::max(std::abs(q.min_entry()), std::abs(q.max_entry())));
  const auto spectrum = centered_spectrum(q);
  const bool globally_solvable = sign > 0.0 ? spectrum.smallest >= -kDefinitenessThreshold
                                            : spectrum.largest <= kDefinitenessThreshold;
  SimplexQuadratic problem(std::move(q), sign);

  std::vector<double> best;
  QpCertificate cert;
  std::size_t skipped = 0;
  std::size_t iterations = 0;

  if (globally_solvable) {
    cert = sign > 0.0 ? QpCertificate::global_convex : QpCertificate::global_concave_max;
    std::vector<double> x0(h, 1.0 / static_cast<double>(h));
    auto run = problem.conditional_gradient(std::move(x0), opt.gap_tolerance, opt.max_iterations);
    iterations = run.iterations;
    best = problem.polish(std::move(run.x));
  } else if (h <= opt.enumeration_limit) {
    cert = QpCertificate::enumerated_exact;
    double best_value = kInfinity;
    const std::uint32_t limit = std::uint32_t{1} << h;
    std::vector<std::size_t> support;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
      support.clear();
      for (std::size_t i = 0; i < h; ++i) {
        if (mask & (std::uint32_t{1} << i)) support.push_back(i);
      }
      bool singular = false;
      auto x = problem.face_stationary_point(support, &singular);
      if (singular) ++skipped;
      if (!x) continue;
      const double v = problem.value(*x);
      if (v < best_value) {
        best_value = v;
        best = std::move(*x);
      }
    }
  } else {
    cert = QpCertificate::heuristic_bound;
    std::mt19937_64 rng(opt.seed);
    std::vector<std::vector<double>> starts;
    starts.emplace_back(h, 1.0 / static_cast<double>(h));
    for (std::size_t i = 0; i < h && starts.size() < std::min<std::size_t>(opt.starts, 16); ++i) {
      std::vector<double> v(h, 0.0);
      v[i] = 1.0;
      starts.push_back(std::move(v));
    }
    while (starts.size() < opt.starts) {
      std::vector<double> v(h);
      for (auto& x : v) {
        // Exponential draws from raw bits give a portable Dirichlet(1) sample.
        const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        x = -std::log(u);
      }
      SimplexQuadratic::normalize(v);
      starts.push_back(std::move(v));
    }
    double best_value = kInfinity;
    for (auto& start : starts) {
      auto run = problem.conditional_gradient(std::move(start), opt.gap_tolerance, opt.max_iterations);
      iterations += run.iterations;
      auto x = problem.polish(std::move(run.x));
      const double v = problem.value(x);
      if (v < best_value || (v == best_value && lexicographically_less(x, best))) {
        best_value = v;
        best = std::move(x);
      }
    }
  }

  auto point = Measure::on(k.size(), H, best);
  const double value = energy(k, point);
  if (cert == QpCertificate::heuristic_bound &&
      sign * (value - entry_extreme) <= 1e-12 * entry_scale) {
    cert = QpCertificate::entry_bound;
  }
  return {value, std::move(point), cert, skipped, iterations};
}

}  // namespace detail

/// Wiener-energy problem: inf over measures on H of mu' K mu.
inline SimplexQpResult minimize_quadratic_on_simplex(const KernelSpace& k, const IndexSet& H,
                                                     const QpOptions& opt = {}) {
  return detail::optimize_on_simplex(k, H, 1.0, opt);
}

/// Maximal-energy problem: sup over measures on H of mu' K mu.
inline SimplexQpResult maximize_quadratic_on_simplex(const KernelSpace& k, const IndexSet& H,
                                                     const QpOptions& opt = {}) {
  return detail::optimize_on_simplex(k, H, -1.0, opt);
}

}  // namespace rdv
