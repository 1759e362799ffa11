#include "gnep/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "gnep/errors.hpp"

namespace gnep {

RelaxationData prepare_relaxation(const GnepInstance& instance) {
  instance.validate();
  RelaxationData data;
  data.num_x = instance.num_vars();
  data.num_players = instance.num_players();
  data.integer_mask = instance.integer_mask();

  using Key = std::pair<std::vector<double>, double>;
  std::map<Key, std::size_t> seen;
  for (const auto& row : instance.constraints) {
    std::vector<double> coeffs(data.num_x, 0.0);
    for (const auto& t : row.terms) coeffs[t.var] += t.coeff;
    if (std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; })) {
      if (row.rhs < 0.0) {
        // An unsatisfiable constant row keeps the relaxation empty.
        data.rows.push_back({coeffs, RowSense::LessEqual, row.rhs});
      }
      continue;
    }
    Key key{coeffs, row.rhs};
    if (seen.count(key)) continue;
    std::vector<double> neg(coeffs.size());
    std::transform(coeffs.begin(), coeffs.end(), neg.begin(), [](double c) { return -c; });
    auto opposite = seen.find(Key{neg, -row.rhs});
    if (opposite != seen.end()) {
      data.rows[opposite->second].sense = RowSense::Equal;
      seen.emplace(std::move(key), opposite->second);
      continue;
    }
    seen.emplace(key, data.rows.size());
    data.rows.push_back({std::move(coeffs), RowSense::LessEqual, row.rhs});
  }

  data.social_linear.assign(data.num_x, 0.0);
  std::map<std::pair<std::size_t, std::size_t>, double> products;
  for (const auto& obj : instance.objectives) {
    data.social_constant += obj.constant;
    for (const auto& t : obj.linear) data.social_linear[t.var] += t.coeff;
    for (const auto& b : obj.bilinear) products[std::minmax(b.a, b.b)] += b.coeff;
  }
  for (const auto& [key, coeff] : products)
    if (coeff != 0.0) data.social_products.push_back({key.first, key.second, coeff});

  data.eta_lower = compute_eta_lower(instance);
  data.eta_upper = eta_upper_bounds(instance);
  for (std::size_t i = 0; i < data.num_players; ++i)
    data.eta_lower[i] = std::min(data.eta_lower[i], data.eta_upper[i]);
  return data;
}

void NodeProblem::add_cut(const CutRow& cut) {
  std::vector<double> coeffs = cut.coeffs;
  coeffs.resize(lp.num_vars(), 0.0);
  lp.add_row(std::move(coeffs), RowSense::LessEqual, cut.rhs);
}

NodeProblem build_node_problem(const RelaxationData& data, std::span<const double> lower,
                               std::span<const double> upper, std::span<const CutRow> cuts) {
  for (std::size_t j = 0; j < data.num_x; ++j)
    if (lower[j] > upper[j])
      throw EmptyDomain("variable " + std::to_string(j) + " has empty domain [" +
                        std::to_string(lower[j]) + ", " + std::to_string(upper[j]) + "]");

  NodeProblem node;
  node.num_x = data.num_x;
  node.num_players = data.num_players;
  LpProblem& lp = node.lp;
  lp.objective = data.social_linear;
  lp.objective_offset = data.social_constant;
  lp.lower.assign(lower.begin(), lower.begin() + static_cast<std::ptrdiff_t>(data.num_x));
  lp.upper.assign(upper.begin(), upper.begin() + static_cast<std::ptrdiff_t>(data.num_x));
  for (std::size_t i = 0; i < data.num_players; ++i)
    lp.add_var(data.eta_lower[i], data.eta_upper[i], -1.0);
  for (const auto& row : data.rows) lp.add_row(row.coeffs, row.sense, row.rhs);
  node.products = linearize_bilinear(lp, data.social_products, data.integer_mask);
  for (const auto& cut : cuts) node.add_cut(cut);
  return node;
}

}  // namespace gnep

namespace gnep {

NodeRelaxation solve_node_relaxation(const RelaxationData& data, std::span<const double> lower,
                                     std::span<const double> upper,
                                     std::span<const CutRow> cuts, double product_tol,
                                     const LpOptions& options, std::size_t box_limit) {
  auto continuous = [&](std::size_t v) { return v < data.num_x && !data.integer_mask[v]; };
  struct Box {
    std::vector<double> lower;
    std::vector<double> upper;
  };
  std::vector<Box> stack;
  stack.push_back({{lower.begin(), lower.end()}, {upper.begin(), upper.end()}});

  NodeRelaxation out;
  double bound = kInf;
  bool have = false;
  while (!stack.empty()) {
    if (out.boxes >= box_limit)
      throw NumericalFailure("spatial search exceeded " + std::to_string(box_limit) + " boxes");
    Box box = std::move(stack.back());
    stack.pop_back();
    ++out.boxes;

    NodeProblem problem = build_node_problem(data, box.lower, box.upper, cuts);
    ++out.lp_solves;
    LpSolution sol = solve_lp(problem.lp, options);
    if (sol.status == LpStatus::Unbounded)
      throw NumericalFailure("node relaxation is unbounded");
    if (sol.status == LpStatus::Infeasible) continue;
    const double cutoff = have ? out.value - 1e-9 * (1.0 + std::abs(out.value)) : kInf;
    if (sol.objective >= cutoff) {
      bound = std::min(bound, sol.objective);
      continue;
    }

    const ProductColumn* worst = nullptr;
    double worst_gap = product_tol;
    for (const auto& prod : problem.products) {
      if (!continuous(prod.a) || !continuous(prod.b)) continue;
      const double gap = std::abs(sol.point[prod.column] - sol.point[prod.a] * sol.point[prod.b]);
      if (gap > worst_gap) {
        worst_gap = gap;
        worst = &prod;
      }
    }
    if (worst == nullptr) {
      out.value = sol.objective;
      out.problem = std::move(problem);
      out.solution = std::move(sol);
      have = true;
      continue;
    }
    const std::size_t a = worst->a, b = worst->b;
    const std::size_t var = box.upper[b] - box.lower[b] > box.upper[a] - box.lower[a] ? b : a;
    const double at = sol.point[var];
    Box down = box;
    down.upper[var] = at;
    Box up = std::move(box);
    up.lower[var] = at;
    stack.push_back(std::move(down));
    stack.push_back(std::move(up));
  }
  if (!have) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.bound = std::min(bound, out.value);
  return out;
}

}  // namespace gnep
