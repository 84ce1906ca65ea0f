#pragma once

// Domain types shared by every module: errors, dense matrices, finite kernel
// spaces, index subsets, discrete probability measures and extended-value
// intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rdv {

enum class ErrorCode {
  NotSquare,
  AsymmetricKernel,
  NegativeEntry,
  NonFiniteEntry,
  MetricViolation,
  ConstantTooSmall,
  EmptyInput,
  EmptySubset,
  IndexOutOfRange,
  DimensionMismatch,
  InvalidMeasure,
  InvalidArgument,
  ParseError,
  SchemaError,
  IoError,
  TooLarge,
  DisconnectedAfterRetries,
  EnumerationCapExceeded,
  NumericalBreakdown,
  CapExceeded,
  UniquenessViolated,
  DualMismatch,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::AsymmetricKernel: return "AsymmetricKernel";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::MetricViolation: return "MetricViolation";
    case ErrorCode::ConstantTooSmall: return "ConstantTooSmall";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DisconnectedAfterRetries: return "DisconnectedAfterRetries";
    case ErrorCode::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::UniquenessViolated: return "UniquenessViolated";
    case ErrorCode::DualMismatch: return "DualMismatch";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a metric axiom fails. The triple (i, j, l) witnesses
/// k(i,j) > k(i,l) + k(l,j); for diagonal/positivity failures it is (i, i, i)
/// or (i, j, j).
class MetricViolationError : public Error {
 public:
  MetricViolationError(std::array<std::size_t, 3> triple, const std::string& message)
      : Error(ErrorCode::MetricViolation, message), triple_(triple) {}

  std::array<std::size_t, 3> triple() const noexcept { return triple_; }

 private:
  std::array<std::size_t, 3> triple_;
};

class EnumerationCapError : public Error {
 public:
  EnumerationCapError(double cap, double required)
      : Error(ErrorCode::EnumerationCapExceeded,
              "multiset enumeration needs " + std::to_string(required) + " items, cap is " +
                  std::to_string(cap)),
        cap_(cap),
        required_(required) {}

  double cap() const noexcept { return cap_; }
  double required() const noexcept { return required_; }

 private:
  double cap_;
  double required_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix out(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) {
        throw Error(ErrorCode::DimensionMismatch,
                    "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                        " entries, expected " + std::to_string(c));
      }
      std::copy(rows[i].begin(), rows[i].end(), out.data_.begin() + static_cast<std::ptrdiff_t>(i * c));
    }
    return out;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  void append_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "appended row length");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  bool square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }

  double max_entry() const {
    return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
  }
  double min_entry() const {
    return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
  }

  std::vector<std::vector<double>> to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Sorted, duplicate-free list of point indices.
using IndexSet = std::vector<std::size_t>;

inline IndexSet all_indices(std::size_t m) {
  IndexSet out(m);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

/// Sorts and validates an index set against a space of m points.
inline IndexSet make_index_set(std::vector<std::size_t> indices, std::size_t m) {
  if (indices.empty()) throw Error(ErrorCode::EmptySubset, "index set is empty");
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw Error(ErrorCode::InvalidArgument, "index set contains duplicates");
  }
  if (indices.back() >= m) {
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(indices.back()) + " out of range for " +
                    std::to_string(m) + " points");
  }
  return indices;
}

inline bool is_subset(const IndexSet& inner, const IndexSet& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

inline constexpr double kValidationTolerance = 1e-12;

/// A finite point set carrying a validated symmetric nonnegative kernel.
/// Instances are immutable; build them with validate_kernel or make().
class KernelSpace {
 public:
  static KernelSpace make(std::string name, std::vector<std::string> points, Matrix kernel,
                          bool require_metric);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& points() const noexcept { return points_; }
  const Matrix& kernel() const noexcept { return kernel_; }
  bool is_metric() const noexcept { return is_metric_; }
  std::size_t size() const noexcept { return points_.size(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return kernel_(i, j); }

  /// Largest kernel entry; the diameter when the kernel is a metric.
  double max_entry() const { return kernel_.max_entry(); }

 private:
  KernelSpace(std::string name, std::vector<std::string> points, Matrix kernel, bool is_metric)
      : name_(std::move(name)), points_(std::move(points)), kernel_(std::move(kernel)),
        is_metric_(is_metric) {}

  std::string name_;
  std::vector<std::string> points_;
  Matrix kernel_;
  bool is_metric_ = false;
};

namespace detail {

inline void check_kernel_entries(const Matrix& k) {
  if (!k.square()) {
    throw Error(ErrorCode::NotSquare, "kernel is " + std::to_string(k.rows()) + "x" +
                                          std::to_string(k.cols()));
  }
  if (k.rows() == 0) throw Error(ErrorCode::EmptyInput, "kernel has no points");
  const std::size_t m = k.rows();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double v = k(i, j);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteEntry,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
      }
      if (v < 0.0) {
        throw Error(ErrorCode::NegativeEntry,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (std::abs(k(i, j) - k(j, i)) > kValidationTolerance) {
        throw Error(ErrorCode::AsymmetricKernel,
                    "k(" + std::to_string(i) + "," + std::to_string(j) + ") != k(" +
                        std::to_string(j) + "," + std::to_string(i) + ")");
      }
    }
  }
}

/// First failing metric axiom, or nullopt when k is a metric.
inline std::optional<MetricViolationError> find_metric_violation(const Matrix& k) {
  const std::size_t m = k.rows();
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(k(i, i)) > kValidationTolerance) {
      return MetricViolationError({i, i, i}, "nonzero diagonal at " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && k(i, j) <= kValidationTolerance) {
        return MetricViolationError({i, j, j}, "distinct points " + std::to_string(i) + ", " +
                                                   std::to_string(j) + " at distance zero");
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto ri = k.row(i);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dij = ri[j];
      for (std::size_t l = 0; l < m; ++l) {
        if (dij > ri[l] + k(l, j) + kValidationTolerance) {
          return MetricViolationError(
              {i, j, l}, "k(" + std::to_string(i) + "," + std::to_string(j) + ") > k(" +
                             std::to_string(i) + "," + std::to_string(l) + ") + k(" +
                             std::to_string(l) + "," + std::to_string(j) + ")");
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline KernelSpace KernelSpace::make(std::string name, std::vector<std::string> points,
                                     Matrix kernel, bool require_metric) {
  detail::check_kernel_entries(kernel);
  if (points.size() != kernel.rows()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(points.size()) + " labels for " +
                                                  std::to_string(kernel.rows()) + " points");
  }
  // Symmetrize exactly so that downstream sums do not depend on orientation.
  const std::size_t m = kernel.rows();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) kernel(j, i) = kernel(i, j);
  }
  auto violation = detail::find_metric_violation(kernel);
  if (violation && require_metric) throw *violation;
  return KernelSpace(std::move(name), std::move(points), std::move(kernel), !violation);
}

inline std::vector<std::string> default_labels(std::size_t m) {
  std::vector<std::string> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = std::to_string(i);
  return out;
}

inline KernelSpace validate_kernel(const Matrix& matrix, bool require_metric) {
  if (!matrix.square()) {
    throw Error(ErrorCode::NotSquare, "kernel is " + std::to_string(matrix.rows()) + "x" +
                                          std::to_string(matrix.cols()));
  }
  return KernelSpace::make("unnamed", default_labels(matrix.rows()), matrix, require_metric);
}

inline KernelSpace validate_kernel(const std::vector<std::vector<double>>& rows,
                                   bool require_metric) {
  return validate_kernel(Matrix::from_rows(rows), require_metric);
}

struct DualKernel {
  KernelSpace space;
  double constant;
};

/// The kernel C - k. C defaults to the largest entry of k.
inline DualKernel dual_kernel(const KernelSpace& k, std::optional<double> constant = std::nullopt) {
  const double top = k.max_entry();
  const double c = constant.value_or(top);
  if (!std::isfinite(c) || c < top) {
    throw Error(ErrorCode::ConstantTooSmall,
                "constant " + std::to_string(c) + " below max entry " + std::to_string(top));
  }
  const std::size_t m = k.size();
  Matrix out(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) out(i, j) = c - k(i, j);
  }
  auto space = KernelSpace::make(k.name() + ":dual", k.points(), std::move(out), false);
  return {std::move(space), c};
}

/// Kernel restricted to rows and columns in `rows` x `cols`.
inline Matrix restrict_kernel(const KernelSpace& k, const IndexSet& rows, const IndexSet& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = k(rows[a], cols[b]);
  }
  return out;
}

/// Where measures live (H) and where potentials are evaluated (L).
struct SubsetPair {
  IndexSet H;
  IndexSet L;

  static SubsetPair make(std::vector<std::size_t> h, std::vector<std::size_t> l, std::size_t m) {
    return {make_index_set(std::move(h), m), make_index_set(std::move(l), m)};
  }
  static SubsetPair full(std::size_t m) { return {all_indices(m), all_indices(m)}; }

  bool nested() const { return is_subset(H, L); }

  friend bool operator==(const SubsetPair&, const SubsetPair&) = default;
};

inline constexpr double kMeasureSumTolerance = 1e-9;
inline constexpr double kSupportThreshold = 1e-12;

/// Probability vector over the points of a space, supported inside a given
/// index set. Small float drift is renormalized away on construction.
class Measure {
 public:
  Measure(std::vector<double> weights, IndexSet support_set)
      : weights_(std::move(weights)), support_set_(std::move(support_set)) {
    const std::size_t m = weights_.size();
    if (m == 0) throw Error(ErrorCode::InvalidMeasure, "measure over empty space");
    support_set_ = make_index_set(std::move(support_set_), m);
    std::vector<char> allowed(m, 0);
    for (auto i : support_set_) allowed[i] = 1;
    for (std::size_t i = 0; i < m; ++i) {
      double& w = weights_[i];
      if (!std::isfinite(w)) throw Error(ErrorCode::InvalidMeasure, "non-finite weight");
      if (w < 0.0) {
        if (w < -kMeasureSumTolerance) {
          throw Error(ErrorCode::InvalidMeasure, "negative weight at " + std::to_string(i));
        }
        w = 0.0;
      }
      if (!allowed[i]) {
        if (w > kMeasureSumTolerance) {
          throw Error(ErrorCode::InvalidMeasure,
                      "mass outside support set at " + std::to_string(i));
        }
        w = 0.0;
      }
    }
    double total = 0.0;
    for (double w : weights_) total += w;
    if (std::abs(total - 1.0) > kMeasureSumTolerance) {
      throw Error(ErrorCode::InvalidMeasure, "weights sum to " + std::to_string(total));
    }
    if (total != 1.0) {
      for (double& w : weights_) w /= total;
    }
  }

  /// Measure on the full space whose weights are given per entry of `support_set`.
  static Measure on(std::size_t m, const IndexSet& support_set, std::span<const double> local) {
    if (local.size() != support_set.size()) {
      throw Error(ErrorCode::DimensionMismatch, "local weights do not match support set");
    }
    std::vector<double> w(m, 0.0);
    for (std::size_t a = 0; a < support_set.size(); ++a) {
      if (support_set[a] >= m) throw Error(ErrorCode::IndexOutOfRange, "support index");
      w[support_set[a]] = local[a];
    }
    return Measure(std::move(w), support_set);
  }

  static Measure uniform(std::size_t m, const IndexSet& support_set) {
    std::vector<double> local(support_set.size(), 1.0 / static_cast<double>(support_set.size()));
    return on(m, support_set, local);
  }
  static Measure uniform(std::size_t m) { return uniform(m, all_indices(m)); }

  static Measure dirac(std::size_t m, std::size_t at) {
    std::vector<double> w(m, 0.0);
    if (at >= m) throw Error(ErrorCode::IndexOutOfRange, "dirac index");
    w[at] = 1.0;
    return Measure(std::move(w), {at});
  }

  const std::vector<double>& weights() const noexcept { return weights_; }
  const IndexSet& support_set() const noexcept { return support_set_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const noexcept { return weights_[i]; }

  /// Indices carrying mass above `threshold`.
  IndexSet active_support(double threshold = kSupportThreshold) const {
    IndexSet out;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (weights_[i] > threshold) out.push_back(i);
    }
    return out;
  }

  friend bool operator==(const Measure&, const Measure&) = default;

 private:
  std::vector<double> weights_;
  IndexSet support_set_;
};

/// Closed subinterval of [0, +inf], possibly empty or with an infinite right
/// endpoint. Infinite endpoints are for reporting; no computation produces them.
class ValueInterval {
 public:
  static ValueInterval closed(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo < 0.0 || hi < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "interval endpoints must lie in [0, inf]");
    }
    if (lo > hi) throw Error(ErrorCode::InvalidArgument, "interval with lo > hi");
    return ValueInterval(lo, hi, false);
  }
  static ValueInterval point(double v) { return closed(v, v); }
  /// Empty interval remembering the crossed endpoints (lo > hi).
  static ValueInterval empty_with(double lo, double hi) { return ValueInterval(lo, hi, true); }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool empty() const noexcept { return empty_; }
  double width() const noexcept { return empty_ ? 0.0 : hi_ - lo_; }
  bool contains(double v, double tol = 0.0) const noexcept {
    return !empty_ && v >= lo_ - tol && v <= hi_ + tol;
  }

  friend bool operator==(const ValueInterval&, const ValueInterval&) = default;

 private:
  ValueInterval(double lo, double hi, bool empty) : lo_(lo), hi_(hi), empty_(empty) {}

  double lo_ = 0.0;
  double hi_ = 0.0;
  bool empty_ = true;
};

inline ValueInterval interval_hull(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "interval hull of no values");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteEntry, "interval hull of non-finite value");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return ValueInterval::closed(*lo, *hi);
}

}  // namespace rdv
