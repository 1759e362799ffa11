#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace gnep {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct LpRow {
  std::vector<double> coeffs;  // dense, one entry per variable
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

/// min objective^T x + objective_offset  s.t.  rows, lower <= x <= upper.
struct LpProblem {
  std::vector<double> objective;
  double objective_offset = 0.0;
  std::vector<LpRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }

  /// Appends a variable with zero objective and returns its index.
  std::size_t add_var(double lb, double ub, double cost = 0.0);
  void add_row(std::vector<double> coeffs, RowSense sense, double rhs);

  /// Throws std::invalid_argument if dimensions disagree, a coefficient is
  /// not finite, or some lower bound exceeds its upper bound.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Status of a column in the final basis. Columns are the structural
/// variables followed by one logical (slack) column per row.
enum class ColumnStatus { Basic, AtLower, AtUpper, FreeZero };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> point;  // structural values
  double objective = 0.0;
  /// Size num_vars + num_rows. Logical column of row r is num_vars + r and
  /// carries value rhs_r - coeffs_r^T x.
  std::vector<ColumnStatus> columns;
  /// basic_columns[r] is the column basic in row position r; -1 marks a
  /// redundant row whose artificial variable stayed basic at zero.
  std::vector<int> basic_columns;
  std::size_t iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  /// Dantzig pricing switches to Bland's rule after this many iterations in
  /// a phase, or after `bland_after_degenerate` consecutive degenerate pivots.
  /// 0 selects 20 * (rows + cols).
  std::size_t bland_after = 0;
  std::size_t bland_after_degenerate = 40;
  /// Hard cap; exceeding it raises NumericalFailure. 0 selects 200 * (rows + cols) + 1000.
  std::size_t max_iterations = 0;
  std::size_t refactor_every = 64;
};

/// Bounded-variable primal simplex on a dense tableau. Returns a basic
/// (vertex) solution with the basis that certifies it.
/// Throws NumericalFailure when the iteration cap is hit.
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

/// Cone at an optimal vertex spanned by the edge directions of the nonbasic
/// columns, projected onto the structural variables.
struct CornerCone {
  std::vector<double> apex;
  std::vector<std::vector<double>> rays;  // unit 2-norm
  std::vector<int> nonbasic_columns;      // column that generated each ray
};

/// Throws DegenerateBasis if some ray vanishes in structural space and
/// std::invalid_argument when the solution is not optimal.
CornerCone extract_corner_cone(const LpSolution& solution, const LpProblem& problem);

}  // namespace gnep
