#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gnep/lp.hpp"

namespace gnep {

struct MilpProblem {
  LpProblem base;
  std::vector<bool> integer_mask;  // one flag per variable of `base`
};

enum class MilpStatus { Optimal, Infeasible };

struct MilpSolution {
  MilpStatus status = MilpStatus::Infeasible;
  std::vector<double> point;  // integer components are rounded
  double objective = 0.0;
  std::size_t nodes = 0;
};

struct MilpOptions {
  double integrality_tol = 1e-6;
  std::size_t node_limit = 1'000'000;
  LpOptions lp;
};

/// Depth-first branch-and-bound solved to zero gap. Branches on the most
/// fractional integer variable (smallest index on ties), up-branch first.
/// Throws NodeLimitExceeded when the node cap is hit.
MilpSolution solve_milp(const MilpProblem& problem, const MilpOptions& options = {});

struct BilinearTerm {
  std::size_t a = 0;
  std::size_t b = 0;
  double coeff = 0.0;
};

/// One auxiliary column standing for the product x_a * x_b.
struct ProductColumn {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t column = 0;
  /// True when one factor is a binary variable, so the envelope pins the
  /// auxiliary to the product at every integer-feasible point.
  bool exact_at_integers = false;
};

/// Replaces bilinear objective terms by auxiliary columns bounded by the
/// McCormick envelope over the current domains of `lp`. Terms on the same
/// unordered pair share one column. The envelope is exact whenever one
/// factor sits at a bound of its domain (in particular for binary factors
/// at integer points). Throws UnboundedTermError on infinite bounds and
/// std::invalid_argument when a term multiplies a variable by itself.
std::vector<ProductColumn> linearize_bilinear(LpProblem& lp, std::span<const BilinearTerm> terms,
                                              const std::vector<bool>& integer_mask);

/// Appends the four envelope rows tying column `z` to x_a * x_b and
/// tightens the bounds of `z` to the interval product.
void append_mccormick_rows(LpProblem& lp, std::size_t a, std::size_t b, std::size_t z);

}  // namespace gnep
