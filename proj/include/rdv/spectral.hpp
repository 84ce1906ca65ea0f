#pragma once

// Symmetric eigen-decomposition by cyclic Jacobi rotations, and the
// sum-zero-subspace definiteness test built on it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "rdv/core.hpp"

namespace rdv {

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j pairs with values[j]
};

/// Cyclic Jacobi iteration. `a` must be symmetric.
inline EigenDecomposition jacobi_eigen(Matrix a, std::size_t max_sweeps = 100) {
  if (!a.square()) throw Error(ErrorCode::NotSquare, "eigen-decomposition of non-square matrix");
  const std::size_t n = a.rows();
  Matrix v(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double scale = 0.0;
  for (double x : a.data()) scale += x * x;
  scale = std::sqrt(scale);

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= 1e-15 * scale || off == 0.0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

/// P A P with P = I - (1/n) * ones, the restriction of the quadratic form of
/// A to sum-zero vectors.
inline Matrix centered(const Matrix& a) {
  const std::size_t n = a.rows();
  const double dn = static_cast<double>(n);
  std::vector<double> row_mean(n, 0.0), col_mean(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row_mean[i] += a(i, j);
      col_mean[j] += a(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    total += row_mean[i];
    row_mean[i] /= dn;
  }
  for (auto& c : col_mean) c /= dn;
  total /= dn * dn;
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a(i, j) - row_mean[i] - col_mean[j] + total;
  }
  // Symmetrize away rounding so Jacobi sees an exactly symmetric input.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = m;
      out(j, i) = m;
    }
  }
  return out;
}

inline constexpr double kDefinitenessThreshold = 1e-10;

struct CenteredSpectrum {
  double smallest = 0.0;
  double largest = 0.0;
  std::vector<double> smallest_vector;  // unit, sum-zero
  std::vector<double> largest_vector;   // unit, sum-zero
};

namespace detail {

inline std::vector<double> recentered_unit(const Matrix& vectors, std::size_t col) {
  const std::size_t n = vectors.rows();
  std::vector<double> c(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = vectors(i, col);
    mean += c[i];
  }
  mean /= static_cast<double>(n);
  double norm = 0.0;
  for (auto& x : c) {
    x -= mean;
    norm += x * x;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& x : c) x /= norm;
  }
  return c;
}

}  // namespace detail

/// Extreme eigenvalues of the centered matrix. The all-ones direction
/// contributes an eigenvalue 0, which never changes a semidefiniteness verdict.
inline CenteredSpectrum centered_spectrum(const Matrix& a) {
  auto eig = jacobi_eigen(centered(a));
  const std::size_t n = eig.values.size();
  CenteredSpectrum s;
  s.smallest = eig.values.front();
  s.largest = eig.values.back();
  s.smallest_vector = detail::recentered_unit(eig.vectors, 0);
  s.largest_vector = detail::recentered_unit(eig.vectors, n - 1);
  return s;
}

/// Quadratic form c' A c.
inline double quadratic_form(const Matrix& a, std::span<const double> c) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double r = 0.0;
    const auto row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) r += row[j] * c[j];
    s += c[i] * r;
  }
  return s;
}

}  // namespace rdv
