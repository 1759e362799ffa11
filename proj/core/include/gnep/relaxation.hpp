#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gnep/cut_row.hpp"
#include "gnep/lp.hpp"
#include "gnep/milp.hpp"
#include "gnep/model.hpp"

namespace gnep {

/// Instance data shared by every node problem of one solve: the joint rows
/// after removing duplicates and fusing opposite pairs into equalities, the
/// eta box, and the social-cost products.
struct RelaxationData {
  std::size_t num_x = 0;
  std::size_t num_players = 0;
  std::vector<LpRow> rows;  // over x only
  std::vector<double> social_linear;
  double social_constant = 0.0;
  std::vector<BilinearTerm> social_products;  // one per unordered pair, nonzero coeff
  std::vector<double> eta_lower;
  std::vector<double> eta_upper;
  std::vector<bool> integer_mask;
};

RelaxationData prepare_relaxation(const GnepInstance& instance);

/// Node problem over columns (x, eta, z): x in the node box, eta in its box,
/// z one auxiliary per social-cost product.
struct NodeProblem {
  LpProblem lp;
  std::size_t num_x = 0;
  std::size_t num_players = 0;
  std::vector<ProductColumn> products;

  std::size_t eta_column(std::size_t player) const { return num_x + player; }
  std::size_t cut_width() const { return num_x + num_players; }
  void add_cut(const CutRow& cut);
};

/// Builds the node LP: minimize sum_i pi_i(x) - sum_i eta_i over the joint
/// rows, the node box [lower, upper] and `cuts`. Throws EmptyDomain when the
/// box is empty.
NodeProblem build_node_problem(const RelaxationData& data, std::span<const double> lower,
                               std::span<const double> upper, std::span<const CutRow> cuts);

/// Exact value of the node relaxation (integrality dropped, products kept)
/// up to `product_tol`: a spatial search splits the domains of continuous
/// factors until every product of two continuous variables is represented
/// exactly at the best box. Products with an integer factor keep their
/// envelope. Throws NumericalFailure past `box_limit` boxes.
struct NodeRelaxation {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;  // objective at `solution`
  double bound = 0.0;  // lower bound on the relaxation value
  NodeProblem problem; // LP of the box that produced `solution`
  LpSolution solution;
  std::size_t lp_solves = 0;
  std::size_t boxes = 0;
};

NodeRelaxation solve_node_relaxation(const RelaxationData& data, std::span<const double> lower,
                                     std::span<const double> upper,
                                     std::span<const CutRow> cuts, double product_tol,
                                     const LpOptions& options = {},
                                     std::size_t box_limit = 100'000);

}  // namespace gnep
