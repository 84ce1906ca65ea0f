#pragma once

// Dense two-phase primal simplex on a full tableau.
//
// Pricing is Dantzig (most negative reduced cost) for the first 10*(rows+cols)
// pivots and Bland's rule afterwards, which guarantees termination. The final
// basis is refactorized with a partial-pivoting LU to recompute primal and
// dual values, and the optimality certificate (primal/dual feasibility, duality
// gap) is always recomputed from the original problem data.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rdv/core.hpp"

namespace rdv {

enum class RowSense { less_equal, equal, greater_equal };
enum class ObjectiveSense { minimize, maximize };

/// optimize objective' x subject to constraints x (sense) rhs and
/// lower <= x <= upper. Lower bounds may be -inf and upper bounds +inf.
struct LinearProgram {
  ObjectiveSense sense = ObjectiveSense::minimize;
  std::vector<double> objective;
  Matrix constraints;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  LinearProgram() = default;
  explicit LinearProgram(std::size_t num_vars, ObjectiveSense s = ObjectiveSense::minimize)
      : sense(s), objective(num_vars, 0.0), constraints(0, num_vars), lower(num_vars, 0.0),
        upper(num_vars, kInfinity) {}

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rhs.size(); }

  void add_row(std::span<const double> coeffs, RowSense s, double b) {
    if (coeffs.size() != num_vars()) {
      throw Error(ErrorCode::DimensionMismatch, "constraint row has wrong length");
    }
    constraints.append_row(coeffs);
    senses.push_back(s);
    rhs.push_back(b);
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

inline std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

struct LpResiduals {
  double primal = 0.0;  // worst violation of a row or bound
  double dual = 0.0;    // worst violation of dual sign or reduced-cost conditions
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap() const { return std::abs(primal_objective - dual_objective); }
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> primal;
  std::vector<double> dual;  // one multiplier per constraint row
  double objective = 0.0;
  LpResiduals residuals;
  std::size_t pivots = 0;
};

inline constexpr double kLpFeasibilityTolerance = 1e-9;
inline constexpr double kLpGapTolerance = 1e-8;
inline constexpr std::size_t kLpSizeCap = 10000;
inline constexpr double kLpConditionCap = 1e14;

/// Feasibility and duality-gap residuals of (x, y) measured on the original
/// problem. Dual multipliers follow the convention objective = rhs' y + bound
/// terms, with reduced costs c - A' y.
inline LpResiduals lp_residuals(const LinearProgram& lp, std::span<const double> x,
                                std::span<const double> y) {
  const std::size_t n = lp.num_vars();
  const std::size_t m = lp.num_rows();
  if (x.size() != n || y.size() != m) {
    throw Error(ErrorCode::DimensionMismatch, "residual check with wrong vector sizes");
  }
  const double sgn = lp.sense == ObjectiveSense::minimize ? 1.0 : -1.0;
  LpResiduals r;

  for (std::size_t i = 0; i < m; ++i) {
    double a = 0.0;
    const auto row = lp.constraints.row(i);
    for (std::size_t j = 0; j < n; ++j) a += row[j] * x[j];
    const double b = lp.rhs[i];
    double v = 0.0;
    switch (lp.senses[i]) {
      case RowSense::less_equal: v = std::max(0.0, a - b); break;
      case RowSense::greater_equal: v = std::max(0.0, b - a); break;
      case RowSense::equal: v = std::abs(a - b); break;
    }
    r.primal = std::max(r.primal, v);
  }
  for (std::size_t j = 0; j < n; ++j) {
    r.primal = std::max(r.primal, std::max(0.0, lp.lower[j] - x[j]));
    r.primal = std::max(r.primal, std::max(0.0, x[j] - lp.upper[j]));
  }

  // Work in minimization form: c' = sgn c, y' = sgn y.
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double yi = sgn * y[i];
    switch (lp.senses[i]) {
      case RowSense::less_equal: r.dual = std::max(r.dual, yi); break;
      case RowSense::greater_equal: r.dual = std::max(r.dual, -yi); break;
      case RowSense::equal: break;
    }
    dual_obj += lp.rhs[i] * yi;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double red = sgn * lp.objective[j];
    for (std::size_t i = 0; i < m; ++i) red -= lp.constraints(i, j) * sgn * y[i];
    if (red > 0.0) {
      if (std::isfinite(lp.lower[j])) {
        dual_obj += lp.lower[j] * red;
      } else {
        r.dual = std::max(r.dual, red);
      }
    } else if (red < 0.0) {
      if (std::isfinite(lp.upper[j])) {
        dual_obj += lp.upper[j] * red;
      } else {
        r.dual = std::max(r.dual, -red);
      }
    }
  }
  double primal_obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) primal_obj += lp.objective[j] * x[j];
  r.primal_objective = primal_obj;
  r.dual_objective = sgn * dual_obj;
  return r;
}

namespace detail {

// How each original variable maps onto nonnegative standard-form columns.
struct VariableMap {
  enum class Kind { shifted, reflected, split } kind = Kind::shifted;
  std::size_t column = 0;  // first standard column
  double offset = 0.0;     // lower bound (shifted) or upper bound (reflected)
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), width_(cols + 1), t_((rows + 2) * (cols + 1), 0.0),
        basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
  double& rhs(std::size_t i) { return t_[i * width_ + cols_]; }
  double rhs(std::size_t i) const { return t_[i * width_ + cols_]; }
  // Row rows_ is the phase-2 objective, row rows_+1 the phase-1 objective.
  std::size_t phase2_row() const { return rows_; }
  std::size_t phase1_row() const { return rows_ + 1; }

  std::vector<std::size_t>& basis() { return basis_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    double* pr = &t_[r * width_];
    const double inv = 1.0 / pr[c];
    for (std::size_t j = 0; j < width_; ++j) pr[j] *= inv;
    pr[c] = 1.0;
    for (std::size_t i = 0; i < rows_ + 2; ++i) {
      if (i == r) continue;
      double* pi = &t_[i * width_];
      const double f = pi[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) pi[j] -= f * pr[j];
      pi[c] = 0.0;
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      double& b = rhs(i);
      if (b < 0.0 && b > -1e-12) b = 0.0;
    }
    basis_[r] = c;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t width_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

inline constexpr double kPivotTolerance = 1e-11;
inline constexpr double kRelativePivotTolerance = 1e-9;
// Right-hand sides are shifted by distinct amounts of this relative size so
// that degenerate vertices (many zero right-hand sides) do not stall the
// simplex; the final basis is re-solved against the exact data.
inline constexpr double kRhsPerturbation = 1e-9;
inline constexpr double kReducedCostTolerance = 1e-11;

enum class PhaseOutcome { optimal, unbounded };

// Runs simplex pivots minimizing the objective stored in `obj_row`. Columns at
// or beyond `column_limit` may not enter.
inline PhaseOutcome run_phase(Tableau& t, std::size_t obj_row, std::size_t column_limit,
                              std::size_t& pivots, std::size_t bland_after,
                              std::size_t max_pivots) {
  const std::size_t m = t.rows();
  while (true) {
    const bool bland = pivots >= bland_after;
    std::size_t enter = column_limit;
    double best = -kReducedCostTolerance;
    for (std::size_t j = 0; j < column_limit; ++j) {
      const double d = t.at(obj_row, j);
      if (d < best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter == column_limit) return PhaseOutcome::optimal;

    double column_max = 0.0;
    for (std::size_t i = 0; i < m; ++i) column_max = std::max(column_max, t.at(i, enter));
    const double pivot_floor = std::max(kPivotTolerance, kRelativePivotTolerance * column_max);
    std::size_t leave = m;
    double ratio = kInfinity;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = t.at(i, enter);
      if (a <= pivot_floor) continue;
      const double q = std::max(t.rhs(i), 0.0) / a;
      if (leave == m || q < ratio - 1e-12) {
        leave = i;
        ratio = q;
      } else if (q <= ratio + 1e-12) {
        const bool better = bland ? t.basis()[i] < t.basis()[leave]
                                  : a > t.at(leave, enter);
        if (better) {
          leave = i;
          ratio = std::min(ratio, q);
        }
      }
    }
    if (leave == m) return PhaseOutcome::unbounded;
    t.pivot(leave, enter);
    if (++pivots > max_pivots) {
      throw Error(ErrorCode::NumericalBreakdown, "simplex exceeded its pivot budget");
    }
  }
}

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) {
  using detail::VariableMap;
  const std::size_t n = lp.num_vars();
  const std::size_t m = lp.num_rows();
  if (lp.constraints.rows() != m || lp.constraints.cols() != n || lp.senses.size() != m ||
      lp.lower.size() != n || lp.upper.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "inconsistent linear program dimensions");
  }
  if (n > kLpSizeCap || m > kLpSizeCap) {
    throw Error(ErrorCode::CapExceeded, "linear program exceeds " + std::to_string(kLpSizeCap) +
                                            " variables or constraints");
  }
  for (double v : lp.objective) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteEntry, "objective");
  }
  for (double v : lp.constraints.data()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteEntry, "constraint matrix");
  }
  for (double v : lp.rhs) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteEntry, "right-hand side");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) || lp.lower[j] == kInfinity ||
        lp.upper[j] == -kInfinity) {
      throw Error(ErrorCode::InvalidArgument, "invalid variable bounds");
    }
    if (lp.lower[j] > lp.upper[j]) {
      LpSolution s;
      s.status = LpStatus::infeasible;
      return s;
    }
  }

  // Standard form: minimize c' z, A z (sense) b, z >= 0.
  std::vector<VariableMap> vars(n);
  std::size_t ncols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower[j])) {
      vars[j] = {VariableMap::Kind::shifted, ncols++, lp.lower[j]};
    } else if (std::isfinite(lp.upper[j])) {
      vars[j] = {VariableMap::Kind::reflected, ncols++, lp.upper[j]};
    } else {
      vars[j] = {VariableMap::Kind::split, ncols, 0.0};
      ncols += 2;
    }
  }
  const std::size_t structural = ncols;
  std::vector<std::size_t> bounded;  // variables needing an explicit upper-bound row
  for (std::size_t j = 0; j < n; ++j) {
    if (vars[j].kind == VariableMap::Kind::shifted && std::isfinite(lp.upper[j])) bounded.push_back(j);
  }
  const std::size_t rows = m + bounded.size();

  Matrix a(rows, structural, 0.0);
  std::vector<double> b(rows, 0.0);
  std::vector<RowSense> sense(rows, RowSense::less_equal);
  const double sgn = lp.sense == ObjectiveSense::minimize ? 1.0 : -1.0;
  std::vector<double> c(structural, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = vars[j];
    const double cj = sgn * lp.objective[j];
    switch (v.kind) {
      case VariableMap::Kind::shifted: c[v.column] = cj; break;
      case VariableMap::Kind::reflected: c[v.column] = -cj; break;
      case VariableMap::Kind::split: c[v.column] = cj; c[v.column + 1] = -cj; break;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    double bi = lp.rhs[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double aij = lp.constraints(i, j);
      if (aij == 0.0) continue;
      const auto& v = vars[j];
      switch (v.kind) {
        case VariableMap::Kind::shifted: a(i, v.column) += aij; bi -= aij * v.offset; break;
        case VariableMap::Kind::reflected: a(i, v.column) -= aij; bi -= aij * v.offset; break;
        case VariableMap::Kind::split:
          a(i, v.column) += aij;
          a(i, v.column + 1) -= aij;
          break;
      }
    }
    b[i] = bi;
    sense[i] = lp.senses[i];
  }
  for (std::size_t k = 0; k < bounded.size(); ++k) {
    const std::size_t j = bounded[k];
    a(m + k, vars[j].column) = 1.0;
    b[m + k] = lp.upper[j] - lp.lower[j];
    sense[m + k] = RowSense::less_equal;
  }

  // Make every right-hand side nonnegative.
  std::vector<double> flip(rows, 1.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (b[i] < 0.0) {
      flip[i] = -1.0;
      b[i] = -b[i];
      for (std::size_t j = 0; j < structural; ++j) a(i, j) = -a(i, j);
      if (sense[i] == RowSense::less_equal) {
        sense[i] = RowSense::greater_equal;
      } else if (sense[i] == RowSense::greater_equal) {
        sense[i] = RowSense::less_equal;
      }
    }
  }

  // Columns: structural | slack/surplus (one per inequality row) | artificial.
  std::vector<std::size_t> slack_col(rows, 0), art_col(rows, 0);
  std::vector<char> has_slack(rows, 0), has_art(rows, 0);
  std::size_t col = structural;
  for (std::size_t i = 0; i < rows; ++i) {
    if (sense[i] != RowSense::equal) {
      slack_col[i] = col++;
      has_slack[i] = 1;
    }
  }
  const std::size_t first_artificial = col;
  for (std::size_t i = 0; i < rows; ++i) {
    if (sense[i] != RowSense::less_equal) {
      art_col[i] = col++;
      has_art[i] = 1;
    }
  }
  const std::size_t total_cols = col;

  double b_scale = 1.0;
  for (double v : b) b_scale = std::max(b_scale, std::abs(v));

  detail::Tableau t(rows, total_cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < structural; ++j) t.at(i, j) = a(i, j);
    if (has_slack[i]) t.at(i, slack_col[i]) = sense[i] == RowSense::less_equal ? 1.0 : -1.0;
    if (has_art[i]) t.at(i, art_col[i]) = 1.0;
    t.rhs(i) = b[i] + detail::kRhsPerturbation * b_scale *
                          (1.0 + static_cast<double>(i + 1) / static_cast<double>(rows + 1));
    t.basis()[i] = has_art[i] ? art_col[i] : slack_col[i];
  }
  // Reduced-cost rows; the initial basis has zero phase-2 cost.
  for (std::size_t j = 0; j < structural; ++j) t.at(t.phase2_row(), j) = c[j];
  for (std::size_t i = 0; i < rows; ++i) {
    if (!has_art[i]) continue;
    for (std::size_t j = 0; j < first_artificial; ++j) t.at(t.phase1_row(), j) -= t.at(i, j);
    t.rhs(t.phase1_row()) -= t.rhs(i);
  }

  const std::size_t bland_after = 10 * (rows + total_cols);
  const std::size_t max_pivots = bland_after + 200 * (rows + total_cols) + 10000;
  std::size_t pivots = 0;
  LpSolution out;

  const bool need_phase1 = first_artificial < total_cols;
  if (need_phase1) {
    detail::run_phase(t, t.phase1_row(), total_cols, pivots, bland_after, max_pivots);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t.basis()[i] >= first_artificial) infeasibility += std::max(t.rhs(i), 0.0);
    }
    // The perturbation alone can leave artificials at O(rows * 1e-9).
    if (infeasibility > 100.0 * detail::kRhsPerturbation * b_scale * static_cast<double>(rows + 1)) {
      out.status = LpStatus::infeasible;
      out.pivots = pivots;
      return out;
    }
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < rows; ++i) {
      if (t.basis()[i] < first_artificial) continue;
      std::size_t best = first_artificial;
      double mag = 1e-9;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (std::abs(t.at(i, j)) > mag) {
          mag = std::abs(t.at(i, j));
          best = j;
        }
      }
      if (best < first_artificial) {
        t.pivot(i, best);
        ++pivots;
      }
    }
  }

  if (detail::run_phase(t, t.phase2_row(), first_artificial, pivots, bland_after, max_pivots) ==
      detail::PhaseOutcome::unbounded) {
    out.status = LpStatus::unbounded;
    out.pivots = pivots;
    return out;
  }

  // Refactorize the final basis: B z_B = b and B' y = c_B.
  std::vector<std::size_t> aux_row(total_cols, 0);
  std::vector<double> aux_value(total_cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (has_slack[r]) {
      aux_row[slack_col[r]] = r;
      aux_value[slack_col[r]] = sense[r] == RowSense::less_equal ? 1.0 : -1.0;
    }
    if (has_art[r]) {
      aux_row[art_col[r]] = r;
      aux_value[art_col[r]] = 1.0;
    }
  }
  auto column_of = [&](std::size_t j, std::size_t i) -> double {
    if (j < structural) return a(i, j);
    return aux_row[j] == i ? aux_value[j] : 0.0;
  };
  std::vector<double> z(total_cols, 0.0);
  std::vector<double> ys(rows, 0.0);
  if (rows > 0) {
    Eigen::MatrixXd basis_matrix(rows, rows);
    Eigen::VectorXd rhs_vec(rows), cost_b(rows);
    for (std::size_t k = 0; k < rows; ++k) {
      const std::size_t j = t.basis()[k];
      for (std::size_t i = 0; i < rows; ++i) {
        basis_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = column_of(j, i);
      }
      cost_b(static_cast<Eigen::Index>(k)) = j < structural ? c[j] : 0.0;
    }
    for (std::size_t i = 0; i < rows; ++i) rhs_vec(static_cast<Eigen::Index>(i)) = b[i];
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    const double rcond = lu.rcond();
    if (!(rcond > 1.0 / kLpConditionCap)) {
      throw Error(ErrorCode::NumericalBreakdown,
                  "basis condition estimate " + std::to_string(1.0 / rcond) + " exceeds 1e14");
    }
    const Eigen::VectorXd zb = lu.solve(rhs_vec);
    const Eigen::VectorXd y = lu.transpose().solve(cost_b);
    for (std::size_t k = 0; k < rows; ++k) {
      double v = zb(static_cast<Eigen::Index>(k));
      if (v < 0.0) {
        if (v < -1e-7) throw Error(ErrorCode::NumericalBreakdown, "refined basis is infeasible");
        v = 0.0;
      }
      z[t.basis()[k]] = v;
    }
    for (std::size_t i = 0; i < rows; ++i) ys[i] = y(static_cast<Eigen::Index>(i));
  }

  out.primal.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = vars[j];
    switch (v.kind) {
      case VariableMap::Kind::shifted: out.primal[j] = v.offset + z[v.column]; break;
      case VariableMap::Kind::reflected: out.primal[j] = v.offset - z[v.column]; break;
      case VariableMap::Kind::split: out.primal[j] = z[v.column] - z[v.column + 1]; break;
    }
  }
  out.dual.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) out.dual[i] = sgn * flip[i] * ys[i];

  out.status = LpStatus::optimal;
  out.pivots = pivots;
  out.residuals = lp_residuals(lp, out.primal, out.dual);
  out.objective = out.residuals.primal_objective;
  if (out.residuals.primal > kLpFeasibilityTolerance || out.residuals.dual > kLpFeasibilityTolerance ||
      out.residuals.gap() > kLpGapTolerance) {
    throw Error(ErrorCode::NumericalBreakdown,
                "optimality certificate failed: primal " + std::to_string(out.residuals.primal) +
                    ", dual " + std::to_string(out.residuals.dual) + ", gap " +
                    std::to_string(out.residuals.gap()));
  }
  return out;
}

}  // namespace rdv
