#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "gnep/errors.hpp"
#include "gnep/instances.hpp"
#include "gnep/lp.hpp"

namespace gnep {

namespace {

constexpr double kEnumTol = 1e-9;

/// Every integer point of one player's box.
std::vector<std::vector<double>> box_points(const PlayerSpec& spec) {
  std::vector<std::vector<double>> out;
  std::vector<double> cur(spec.lower.begin(), spec.lower.end());
  for (auto& v : cur) v = std::ceil(v - kEnumTol);
  if (spec.size() == 0) return {cur};
  while (true) {
    out.push_back(cur);
    std::size_t j = 0;
    while (j < cur.size()) {
      if (cur[j] + 1.0 <= spec.upper[j] + kEnumTol) {
        cur[j] += 1.0;
        break;
      }
      cur[j] = std::ceil(spec.lower[j] - kEnumTol);
      ++j;
    }
    if (j == cur.size()) break;
  }
  return out;
}

bool rows_hold(const std::vector<const ConstraintRow*>& rows, const std::vector<double>& x) {
  for (const ConstraintRow* row : rows) {
    double lhs = 0.0;
    for (const auto& t : row->terms) lhs += t.coeff * x[t.var];
    if (lhs > row->rhs + kEnumTol * (1.0 + std::abs(row->rhs))) return false;
  }
  return true;
}

}  // namespace

std::vector<std::vector<double>> enumerate_equilibria(const GnepInstance& instance,
                                                      std::size_t cap) {
  instance.validate();
  const std::size_t n = instance.num_players();
  for (const auto& p : instance.players)
    if (p.l != 0) throw std::invalid_argument("enumerate_equilibria needs integer variables only");

  std::vector<std::size_t> radix;
  double total = 1.0;
  for (const auto& p : instance.players) {
    double count = 1.0;
    for (std::size_t j = 0; j < p.size(); ++j)
      count *= std::floor(p.upper[j] + kEnumTol) - std::ceil(p.lower[j] - kEnumTol) + 1.0;
    total *= count;
    if (total > static_cast<double>(cap))
      throw TooLarge("profile space exceeds " + std::to_string(cap) + " profiles");
  }
  std::vector<std::vector<std::vector<double>>> strategies;
  for (const auto& p : instance.players) {
    strategies.push_back(box_points(p));
    radix.push_back(strategies.back().size());
  }

  std::vector<const ConstraintRow*> all_rows;
  std::vector<std::vector<const ConstraintRow*>> own_rows(n);
  for (const auto& row : instance.constraints) {
    all_rows.push_back(&row);
    own_rows[row.owner].push_back(&row);
  }
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < n; ++i) offsets.push_back(instance.offset(i));

  auto assemble = [&](const std::vector<std::size_t>& idx) {
    std::vector<double> x(instance.num_vars());
    for (std::size_t i = 0; i < n; ++i)
      std::copy(strategies[i][idx[i]].begin(), strategies[i][idx[i]].end(),
                x.begin() + static_cast<std::ptrdiff_t>(offsets[i]));
    return x;
  };

  // Phi_i memoized on the rivals' strategy indices.
  std::vector<std::unordered_map<std::uint64_t, double>> memo(n);
  auto rival_key = [&](const std::vector<std::size_t>& idx, std::size_t i) {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      key = key * radix[k] + idx[k];
    }
    return key;
  };
  auto phi = [&](std::vector<std::size_t> idx, std::size_t i) {
    const std::uint64_t key = rival_key(idx, i);
    if (auto it = memo[i].find(key); it != memo[i].end()) return it->second;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < radix[i]; ++s) {
      idx[i] = s;
      const auto x = assemble(idx);
      if (!rows_hold(own_rows[i], x)) continue;
      best = std::min(best, eval_cost(instance, i, x));
    }
    memo[i].emplace(key, best);
    return best;
  };

  std::vector<std::vector<double>> out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    const auto x = assemble(idx);
    if (rows_hold(all_rows, x)) {
      bool nash = true;
      for (std::size_t i = 0; i < n && nash; ++i)
        nash = eval_cost(instance, i, x) <= phi(idx, i) + kEnumTol;
      if (nash) out.push_back(x);
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == radix[k]) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

namespace {

std::vector<std::size_t> topological_order(const ImplementationGameParams& p) {
  std::vector<std::size_t> indeg(p.num_nodes, 0), order;
  for (const auto& a : p.arcs) ++indeg[a.to];
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < p.num_nodes; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    const std::size_t v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (const auto& a : p.arcs)
      if (a.from == v && --indeg[a.to] == 0) ready.push_back(a.to);
  }
  if (order.size() != p.num_nodes) throw InvalidGraph("graph has a directed cycle");
  return order;
}

void collect_paths(const ImplementationGameParams& p, std::size_t v, std::size_t sink,
                   std::vector<std::size_t>& stack, std::vector<std::vector<std::size_t>>& out,
                   std::size_t cap) {
  if (v == sink) {
    out.push_back(stack);
    if (out.size() > cap) throw TooLarge("too many source-sink paths");
    return;
  }
  for (std::size_t a = 0; a < p.arcs.size(); ++a) {
    if (p.arcs[a].from != v) continue;
    stack.push_back(a);
    collect_paths(p, p.arcs[a].to, sink, stack, out, cap);
    stack.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_flows(const ImplementationGameParams& params,
                                              std::size_t player, std::size_t cap) {
  topological_order(params);
  const auto& pl = params.players.at(player);
  const std::size_t e = params.arcs.size();
  std::set<std::vector<int>> flows;
  flows.insert(std::vector<int>(e, 0));
  if (pl.demand == 0) return {flows.begin(), flows.end()};

  std::vector<std::vector<std::size_t>> paths;
  std::vector<std::size_t> stack;
  collect_paths(params, pl.source, pl.sink, stack, paths, cap);

  std::vector<int> limit(e);
  for (std::size_t a = 0; a < e; ++a) limit[a] = std::min(params.capacity[a], pl.demand);
  std::vector<int> cur(e, 0);
  // Multisets of `demand` paths, non-decreasing path index.
  auto rec = [&](auto&& self, std::size_t first, int remaining) -> void {
    if (remaining == 0) {
      flows.insert(cur);
      if (flows.size() > cap) throw TooLarge("too many flows for player " + std::to_string(player));
      return;
    }
    for (std::size_t k = first; k < paths.size(); ++k) {
      bool fits = true;
      for (std::size_t a : paths[k]) fits = fits && cur[a] < limit[a];
      if (!fits) continue;
      for (std::size_t a : paths[k]) ++cur[a];
      self(self, k, remaining - 1);
      for (std::size_t a : paths[k]) --cur[a];
    }
  };
  rec(rec, 0, pl.demand);
  return {flows.begin(), flows.end()};
}

namespace {

std::vector<double> caps_of(const ImplementationGameParams& p) {
  if (!p.price_cap.empty()) return p.price_cap;
  double max_mu = 0.0;
  for (const auto& pl : p.players)
    for (double u : pl.utility) max_mu = std::max(max_mu, u);
  int max_c = 0;
  for (int c : p.capacity) max_c = std::max(max_c, c);
  return std::vector<double>(p.arcs.size(),
                             static_cast<double>(p.arcs.size()) * max_mu * max_c + 1.0);
}

bool is_zero(const std::vector<int>& f) {
  return std::all_of(f.begin(), f.end(), [](int v) { return v == 0; });
}

}  // namespace

ImplementationOracle implementation_oracle(const ImplementationGameParams& params,
                                           std::size_t cap) {
  const std::size_t n = params.players.size();
  const std::size_t e = params.arcs.size();
  const std::vector<double> pmax = caps_of(params);
  std::vector<std::vector<std::vector<int>>> flows;
  double total = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    flows.push_back(enumerate_flows(params, i, cap));
    total *= static_cast<double>(flows.back().size());
    if (total > static_cast<double>(cap))
      throw TooLarge("flow profile space exceeds " + std::to_string(cap));
  }

  ImplementationOracle result;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    ++result.profiles_checked;
    std::vector<int> load(e, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < e; ++a) load[a] += flows[i][idx[i]][a];
    bool feasible = true;
    for (std::size_t a = 0; a < e; ++a) feasible = feasible && load[a] <= params.capacity[a];

    if (feasible) {
      // Authority optimality pins prices except on arcs loaded exactly at target.
      LpProblem lp;
      for (std::size_t a = 0; a < e; ++a) {
        double lo = 0.0, hi = pmax[a];
        if (load[a] < params.target[a]) hi = 0.0;
        if (load[a] > params.target[a]) lo = pmax[a];
        lp.add_var(lo, hi, 0.0);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const auto& xi = flows[i][idx[i]];
        const auto& mu = params.players[i].utility;
        for (const auto& y : flows[i]) {
          if (y == xi) continue;
          bool fits = true;
          for (std::size_t a = 0; a < e; ++a)
            fits = fits && load[a] - xi[a] + y[a] <= params.capacity[a];
          if (!fits) continue;
          // (p - mu)^T x_i <= (p - mu)^T y
          std::vector<double> coeffs(e);
          double rhs = 0.0;
          for (std::size_t a = 0; a < e; ++a) {
            coeffs[a] = xi[a] - y[a];
            rhs += mu[a] * (xi[a] - y[a]);
          }
          lp.add_row(std::move(coeffs), RowSense::LessEqual, rhs);
        }
      }
      const LpSolution sol = solve_lp(lp);
      if (sol.status == LpStatus::Optimal) {
        result.has_equilibrium = true;
        for (std::size_t i = 0; i < n; ++i) {
          const auto& f = flows[i][idx[i]];
          result.witness.insert(result.witness.end(), f.begin(), f.end());
          result.witness.push_back(is_zero(f) && params.players[i].demand > 0 ? 0.0 : 1.0);
        }
        result.witness.insert(result.witness.end(), sol.point.begin(), sol.point.end());
        return result;
      }
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == flows[k].size()) idx[k++] = 0;
    if (k == n) break;
  }
  return result;
}

ImplementationAudit audit_implementation(const ImplementationGameParams& params,
                                         const std::vector<double>& profile, double tol) {
  const std::size_t n = params.players.size();
  const std::size_t e = params.arcs.size();
  const std::size_t block = e + 1;
  const std::vector<double> pmax = caps_of(params);
  if (profile.size() != n * block + e)
    throw std::invalid_argument("profile length does not match the game");
  auto x = [&](std::size_t i, std::size_t a) { return profile[i * block + a]; };
  auto price = [&](std::size_t a) { return profile[n * block + a]; };

  std::vector<double> load(e, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < e; ++a) load[a] += x(i, a);

  ImplementationAudit audit;
  audit.load_within_target = true;
  audit.complementary_prices = true;
  audit.prices_capped = true;
  for (std::size_t a = 0; a < e; ++a) {
    audit.load_within_target = audit.load_within_target && load[a] <= params.target[a] + tol;
    if (load[a] < params.target[a] - tol)
      audit.complementary_prices = audit.complementary_prices && price(a) <= tol;
    audit.prices_capped = audit.prices_capped && price(a) <= pmax[a] + tol && price(a) >= -tol;
  }

  audit.players_optimal = true;
  for (std::size_t i = 0; i < n && audit.players_optimal; ++i) {
    const auto& mu = params.players[i].utility;
    std::vector<int> xi(e);
    for (std::size_t a = 0; a < e; ++a) xi[a] = static_cast<int>(std::lround(x(i, a)));
    const auto candidates = enumerate_flows(params, i);
    if (std::find(candidates.begin(), candidates.end(), xi) == candidates.end()) {
      audit.players_optimal = false;
      break;
    }
    double current = 0.0;
    for (std::size_t a = 0; a < e; ++a) current += (price(a) - mu[a]) * xi[a];
    for (const auto& y : candidates) {
      bool fits = true;
      double value = 0.0;
      for (std::size_t a = 0; a < e; ++a) {
        fits = fits && load[a] - xi[a] + y[a] <= params.capacity[a] + tol;
        value += (price(a) - mu[a]) * y[a];
      }
      if (fits && value < current - tol) {
        audit.players_optimal = false;
        break;
      }
    }
  }
  return audit;
}

}  // namespace gnep
