#include "gnep/milp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "gnep/errors.hpp"

namespace gnep {

namespace {

struct BoundsNode {
  std::vector<double> lower;
  std::vector<double> upper;
};

}  // namespace

MilpSolution solve_milp(const MilpProblem& problem, const MilpOptions& options) {
  const std::size_t n = problem.base.num_vars();
  if (problem.integer_mask.size() != n)
    throw std::invalid_argument("solve_milp: integer mask length differs from variable count");

  LpProblem lp = problem.base;
  for (std::size_t j = 0; j < n; ++j) {
    if (!problem.integer_mask[j]) continue;
    lp.lower[j] = std::ceil(lp.lower[j] - options.integrality_tol);
    lp.upper[j] = std::floor(lp.upper[j] + options.integrality_tol);
  }

  MilpSolution best;
  bool have_incumbent = false;
  std::vector<BoundsNode> stack;
  stack.push_back({lp.lower, lp.upper});

  while (!stack.empty()) {
    if (best.nodes >= options.node_limit)
      throw NodeLimitExceeded("solve_milp: node limit of " + std::to_string(options.node_limit) +
                              " reached");
    BoundsNode node = std::move(stack.back());
    stack.pop_back();
    ++best.nodes;

    bool empty = false;
    for (std::size_t j = 0; j < n; ++j)
      if (node.lower[j] > node.upper[j]) empty = true;
    if (empty) continue;

    lp.lower = node.lower;
    lp.upper = node.upper;
    const LpSolution relax = solve_lp(lp, options.lp);
    if (relax.status == LpStatus::Infeasible) continue;
    if (relax.status == LpStatus::Unbounded)
      throw std::domain_error("solve_milp: LP relaxation is unbounded");
    if (have_incumbent &&
        relax.objective >= best.objective - 1e-9 * (1.0 + std::abs(best.objective)))
      continue;

    std::size_t branch_var = n;
    double best_frac = options.integrality_tol;
    for (std::size_t j = 0; j < n; ++j) {
      if (!problem.integer_mask[j]) continue;
      const double v = relax.point[j];
      const double frac = std::abs(v - std::round(v));
      if (frac > best_frac) {
        best_frac = frac;
        branch_var = j;
      }
    }

    if (branch_var == n) {
      std::vector<double> point = relax.point;
      for (std::size_t j = 0; j < n; ++j)
        if (problem.integer_mask[j]) point[j] = std::round(point[j]);
      double obj = problem.base.objective_offset;
      for (std::size_t j = 0; j < n; ++j) obj += problem.base.objective[j] * point[j];
      if (!have_incumbent || obj < best.objective) {
        best.point = std::move(point);
        best.objective = obj;
        best.status = MilpStatus::Optimal;
        have_incumbent = true;
      }
      continue;
    }

    const double v = relax.point[branch_var];
    BoundsNode down = node;
    down.upper[branch_var] = std::floor(v);
    BoundsNode up = std::move(node);
    up.lower[branch_var] = std::ceil(v);
    stack.push_back(std::move(down));
    stack.push_back(std::move(up));
  }
  return best;
}

void append_mccormick_rows(LpProblem& lp, std::size_t a, std::size_t b, std::size_t z) {
  const double la = lp.lower[a], ua = lp.upper[a];
  const double lb = lp.lower[b], ub = lp.upper[b];
  if (!std::isfinite(la) || !std::isfinite(ua) || !std::isfinite(lb) || !std::isfinite(ub))
    throw UnboundedTermError("bilinear term over variables " + std::to_string(a) + " and " +
                             std::to_string(b) + " has an infinite bound");
  const std::size_t n = lp.num_vars();
  // Rows without x_a or x_b reduce to a bound on z, which the interval
  // bounds below already carry.
  auto row = [&](double ca, double cb, double cz, double rhs) {
    if (ca == 0.0 && cb == 0.0) return;
    std::vector<double> c(n, 0.0);
    c[a] += ca;
    c[b] += cb;
    c[z] += cz;
    lp.add_row(std::move(c), RowSense::LessEqual, rhs);
  };
  // z >= la*y + lb*x - la*lb   and   z >= ua*y + ub*x - ua*ub
  row(lb, la, -1.0, la * lb);
  row(ub, ua, -1.0, ua * ub);
  // z <= ua*y + lb*x - ua*lb   and   z <= la*y + ub*x - la*ub
  row(-lb, -ua, 1.0, -ua * lb);
  row(-ub, -la, 1.0, -la * ub);

  const double corners[] = {la * lb, la * ub, ua * lb, ua * ub};
  lp.lower[z] = *std::min_element(std::begin(corners), std::end(corners));
  lp.upper[z] = *std::max_element(std::begin(corners), std::end(corners));
}

std::vector<ProductColumn> linearize_bilinear(LpProblem& lp, std::span<const BilinearTerm> terms,
                                              const std::vector<bool>& integer_mask) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::vector<ProductColumn> out;
  const std::size_t original = lp.num_vars();
  for (const auto& t : terms) {
    if (t.a == t.b)
      throw std::invalid_argument("linearize_bilinear: term squares variable " +
                                  std::to_string(t.a));
    if (t.a >= original || t.b >= original)
      throw std::invalid_argument("linearize_bilinear: term references an unknown variable");
    const auto key = std::minmax(t.a, t.b);
    auto it = index.find(key);
    if (it == index.end()) {
      const std::size_t z = lp.add_var(0.0, 0.0);
      append_mccormick_rows(lp, key.first, key.second, z);
      auto is_binary = [&](std::size_t v) {
        return v < integer_mask.size() && integer_mask[v] && lp.lower[v] >= 0.0 &&
               lp.upper[v] <= 1.0;
      };
      out.push_back({key.first, key.second, z, is_binary(key.first) || is_binary(key.second)});
      it = index.emplace(key, out.size() - 1).first;
    }
    lp.objective[out[it->second].column] += t.coeff;
  }
  return out;
}

}  // namespace gnep
