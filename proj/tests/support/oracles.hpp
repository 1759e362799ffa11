#pragma once

// Brute-force references used by the unit and acceptance tests. Everything
// here is deliberately naive: enumeration instead of pivoting, bisection
// instead of ratio tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gnep/cuts.hpp"
#include "gnep/lp.hpp"
#include "gnep/milp.hpp"
#include "gnep/model.hpp"

namespace gnep::oracle {

struct VertexOptimum {
  double objective = 0.0;
  std::vector<double> point;
};

/// Minimum of a bounded LP by enumerating every basis of active constraints.
/// Only usable for a handful of variables and rows.
inline std::optional<VertexOptimum> lp_by_vertices(const LpProblem& lp, double tol = 1e-7) {
  const std::size_t n = lp.num_vars();
  // Candidate hyperplanes: rows, then lower and upper bounds.
  std::vector<std::vector<double>> planes;
  std::vector<double> rhs;
  for (const auto& row : lp.rows) {
    planes.push_back(row.coeffs);
    rhs.push_back(row.rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    planes.push_back(e);
    rhs.push_back(lp.lower[j]);
    planes.push_back(e);
    rhs.push_back(lp.upper[j]);
  }

  auto feasible = [&](const std::vector<double>& x) {
    for (std::size_t j = 0; j < n; ++j)
      if (x[j] < lp.lower[j] - tol || x[j] > lp.upper[j] + tol) return false;
    for (const auto& row : lp.rows) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += row.coeffs[j] * x[j];
      const double scale = 1.0 + std::abs(row.rhs);
      if (row.sense != RowSense::GreaterEqual && lhs > row.rhs + tol * scale) return false;
      if (row.sense != RowSense::LessEqual && lhs < row.rhs - tol * scale) return false;
    }
    return true;
  };

  std::optional<VertexOptimum> best;
  const std::size_t p = planes.size();
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (pick.size() == n) {
      Eigen::MatrixXd a(n, n);
      Eigen::VectorXd b(n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < n; ++j) a(r, j) = planes[pick[r]][j];
        b(r) = rhs[pick[r]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < static_cast<Eigen::Index>(n)) return;
      const Eigen::VectorXd sol = lu.solve(b);
      std::vector<double> x(sol.data(), sol.data() + n);
      if (!feasible(x)) return;
      double obj = lp.objective_offset;
      for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
      if (!best || obj < best->objective - 1e-12) best = VertexOptimum{obj, x};
      return;
    }
    for (std::size_t k = start; k < p; ++k) {
      pick.push_back(k);
      rec(k + 1);
      pick.pop_back();
    }
  };
  if (n == 0) {
    if (feasible({})) return VertexOptimum{lp.objective_offset, {}};
    return std::nullopt;
  }
  rec(0);
  return best;
}

/// Calls `fn` on every integer vector in the box [lower, upper] restricted
/// to the positions flagged in `mask`; other positions keep `base`.
inline void for_each_integer_point(const std::vector<double>& lower,
                                   const std::vector<double>& upper,
                                   const std::vector<bool>& mask, std::vector<double> base,
                                   const std::function<void(const std::vector<double>&)>& fn) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask[j]) idx.push_back(j);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == idx.size()) {
      fn(base);
      return;
    }
    const std::size_t j = idx[k];
    for (double v = std::ceil(lower[j] - 1e-9); v <= upper[j] + 1e-9; v += 1.0) {
      base[j] = v;
      rec(k + 1);
    }
  };
  rec(0);
}

/// MILP optimum by enumerating the integer part and solving the remaining
/// LP by vertex enumeration.
inline std::optional<VertexOptimum> milp_by_enumeration(const MilpProblem& problem) {
  const auto& lp = problem.base;
  std::optional<VertexOptimum> best;
  for_each_integer_point(lp.lower, lp.upper, problem.integer_mask,
                         std::vector<double>(lp.num_vars(), 0.0),
                         [&](const std::vector<double>& fixed) {
                           LpProblem sub = lp;
                           for (std::size_t j = 0; j < lp.num_vars(); ++j)
                             if (problem.integer_mask[j]) sub.lower[j] = sub.upper[j] = fixed[j];
                           const auto opt = lp_by_vertices(sub);
                           if (opt && (!best || opt->objective < best->objective - 1e-12))
                             best = opt;
                         });
  return best;
}

/// pi_i(x) straight from the instance data.
inline double naive_cost(const GnepInstance& inst, std::size_t player,
                         std::span<const double> x) {
  const auto& f = inst.objectives[player];
  double v = f.constant;
  for (const auto& t : f.linear) v += t.coeff * x[t.var];
  for (const auto& b : f.bilinear) v += b.coeff * x[b.a] * x[b.b];
  return v;
}

inline bool own_rows_hold(const GnepInstance& inst, std::size_t player,
                          std::span<const double> x, double tol = 1e-9) {
  for (const auto& row : inst.constraints) {
    if (row.owner != player) continue;
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coeff * x[t.var];
    if (lhs > row.rhs + tol) return false;
  }
  return true;
}

/// Phi_i(x_-i) by enumerating the player's integer box. Requires an
/// all-integer player block. Empty when no strategy is feasible.
inline std::optional<double> best_response_value(const GnepInstance& inst, std::size_t player,
                                                 std::span<const double> x) {
  const std::size_t off = inst.offset(player);
  const std::size_t size = inst.players[player].size();
  std::vector<bool> mask(inst.num_vars(), false);
  for (std::size_t j = off; j < off + size; ++j) mask[j] = true;
  std::optional<double> best;
  for_each_integer_point(inst.lower_bounds(), inst.upper_bounds(), mask,
                         std::vector<double>(x.begin(), x.end()),
                         [&](const std::vector<double>& y) {
                           if (!own_rows_hold(inst, player, y)) return;
                           const double c = naive_cost(inst, player, y);
                           if (!best || c < *best) best = c;
                         });
  return best;
}

/// Every feasible profile of an all-integer instance.
inline std::vector<std::vector<double>> feasible_profiles(const GnepInstance& inst) {
  std::vector<std::vector<double>> out;
  for_each_integer_point(inst.lower_bounds(), inst.upper_bounds(),
                         std::vector<bool>(inst.num_vars(), true),
                         std::vector<double>(inst.num_vars(), 0.0),
                         [&](const std::vector<double>& x) {
                           for (std::size_t i = 0; i < inst.num_players(); ++i)
                             if (!own_rows_hold(inst, i, x)) return;
                           out.push_back(x);
                         });
  return out;
}

/// Equilibria of an all-integer instance straight from the definition.
inline std::vector<std::vector<double>> equilibria(const GnepInstance& inst) {
  std::vector<std::vector<double>> out;
  for (const auto& x : feasible_profiles(inst)) {
    bool ok = true;
    for (std::size_t i = 0; i < inst.num_players() && ok; ++i) {
      const auto phi = best_response_value(inst, i, x);
      ok = phi && naive_cost(inst, i, x) <= *phi + 1e-9;
    }
    if (ok) out.push_back(x);
  }
  return out;
}

/// Largest t with apex + t * ray inside `set`, by bisection.
inline double alpha_by_bisection(std::span<const double> apex, std::span<const double> ray,
                                 const NeFreeSet& set, double hi = 1e7) {
  auto inside = [&](double t) {
    std::vector<double> p(apex.size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = apex[j] + t * ray[j];
    return set.contains(p, 1e-12);
  };
  if (inside(hi)) return std::numeric_limits<double>::infinity();
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return lo;
}

/// Fraction of samples <= v for every distinct v, in increasing order.
inline std::vector<std::pair<double, double>> ecdf_reference(const std::vector<double>& values) {
  std::vector<double> distinct = values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::pair<double, double>> out;
  for (double v : distinct) {
    const auto count = std::count_if(values.begin(), values.end(), [&](double w) { return w <= v; });
    out.emplace_back(v, static_cast<double>(count) / static_cast<double>(values.size()));
  }
  return out;
}

}  // namespace gnep::oracle
