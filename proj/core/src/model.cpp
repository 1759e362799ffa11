#include "gnep/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gnep/errors.hpp"

namespace gnep {

std::size_t GnepInstance::num_vars() const {
  std::size_t total = 0;
  for (const auto& p : players) total += p.size();
  return total;
}

std::size_t GnepInstance::offset(std::size_t player) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < player; ++i) off += players[i].size();
  return off;
}

std::size_t GnepInstance::owner_of(std::size_t var) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < players.size(); ++i) {
    off += players[i].size();
    if (var < off) return i;
  }
  throw std::out_of_range("variable index " + std::to_string(var) + " out of range");
}

bool GnepInstance::is_integer(std::size_t var) const {
  const std::size_t i = owner_of(var);
  return var - offset(i) < players[i].k;
}

double GnepInstance::lower(std::size_t var) const {
  const std::size_t i = owner_of(var);
  return players[i].lower[var - offset(i)];
}

double GnepInstance::upper(std::size_t var) const {
  const std::size_t i = owner_of(var);
  return players[i].upper[var - offset(i)];
}

std::vector<bool> GnepInstance::integer_mask() const {
  std::vector<bool> mask;
  for (const auto& p : players)
    for (std::size_t j = 0; j < p.size(); ++j) mask.push_back(j < p.k);
  return mask;
}

std::vector<double> GnepInstance::lower_bounds() const {
  std::vector<double> out;
  for (const auto& p : players) out.insert(out.end(), p.lower.begin(), p.lower.end());
  return out;
}

std::vector<double> GnepInstance::upper_bounds() const {
  std::vector<double> out;
  for (const auto& p : players) out.insert(out.end(), p.upper.begin(), p.upper.end());
  return out;
}

bool GnepInstance::standard_nep() const {
  for (const auto& row : constraints)
    for (const auto& t : row.terms)
      if (t.coeff != 0.0 && owner_of(t.var) != row.owner) return false;
  return true;
}

bool GnepInstance::all_binary() const {
  for (const auto& p : players) {
    if (p.l != 0) return false;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (p.lower[j] < 0.0 || p.upper[j] > 1.0) return false;
  }
  return true;
}

void GnepInstance::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("GnepInstance: " + msg); };
  if (players.empty()) fail("no players");
  if (objectives.size() != players.size()) fail("one objective per player required");
  const std::size_t n = num_vars();
  for (std::size_t i = 0; i < players.size(); ++i) {
    const auto& p = players[i];
    if (p.lower.size() != p.size() || p.upper.size() != p.size())
      fail("bounds of player " + std::to_string(i) + " do not match k + l");
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!std::isfinite(p.lower[j]) || !std::isfinite(p.upper[j]))
        fail("player " + std::to_string(i) + " has an infinite bound");
      if (p.lower[j] > p.upper[j])
        fail("player " + std::to_string(i) + " has crossing bounds at " + std::to_string(j));
    }
  }
  auto check_terms = [&](const std::vector<Term>& terms, const std::string& where) {
    for (const auto& t : terms) {
      if (t.var >= n) fail(where + " references variable " + std::to_string(t.var));
      if (!std::isfinite(t.coeff)) fail(where + " has a non-finite coefficient");
    }
  };
  for (std::size_t r = 0; r < constraints.size(); ++r) {
    const auto& row = constraints[r];
    if (row.owner >= players.size()) fail("constraint " + std::to_string(r) + " has bad owner");
    if (!std::isfinite(row.rhs)) fail("constraint " + std::to_string(r) + " has non-finite rhs");
    check_terms(row.terms, "constraint " + std::to_string(r));
  }
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    const auto& obj = objectives[i];
    const std::string where = "objective " + std::to_string(i);
    if (!std::isfinite(obj.constant)) fail(where + " has a non-finite constant");
    check_terms(obj.linear, where);
    for (const auto& b : obj.bilinear) {
      if (b.a >= n || b.b >= n) fail(where + " has a product on an unknown variable");
      if (!std::isfinite(b.coeff)) fail(where + " has a non-finite product coefficient");
      if (owner_of(b.a) == owner_of(b.b))
        fail(where + " multiplies two variables of the same player");
    }
  }
}

std::vector<double> round_integers(const GnepInstance& instance, std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  std::size_t off = 0;
  for (const auto& p : instance.players) {
    for (std::size_t j = 0; j < p.k; ++j) out[off + j] = std::round(out[off + j]);
    off += p.size();
  }
  return out;
}

double eval_cost(const GnepInstance& instance, std::size_t player, std::span<const double> x) {
  const auto& obj = instance.objectives.at(player);
  double v = obj.constant;
  for (const auto& t : obj.linear) v += t.coeff * x[t.var];
  for (const auto& b : obj.bilinear) v += b.coeff * x[b.a] * x[b.b];
  return v;
}

std::vector<double> replace_block(const GnepInstance& instance, std::span<const double> x,
                                  std::size_t player, std::span<const double> block) {
  std::vector<double> out(x.begin(), x.end());
  std::copy(block.begin(), block.end(), out.begin() + static_cast<std::ptrdiff_t>(instance.offset(player)));
  return out;
}

double eval_psi(const GnepInstance& instance, std::span<const double> x,
                std::span<const double> y) {
  double psi = 0.0;
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    const std::size_t off = instance.offset(i);
    const auto block = y.subspan(off, instance.players[i].size());
    psi += eval_cost(instance, i, x) - eval_cost(instance, i, replace_block(instance, x, i, block));
  }
  return psi;
}

BestResponse best_response(const GnepInstance& instance, std::size_t player,
                           std::span<const double> x, const MilpOptions& options) {
  const auto& spec = instance.players.at(player);
  const std::size_t off = instance.offset(player);
  const std::size_t size = spec.size();
  auto own = [&](std::size_t var) { return var >= off && var < off + size; };

  MilpProblem milp;
  LpProblem& lp = milp.base;
  lp.objective.assign(size, 0.0);
  lp.lower = spec.lower;
  lp.upper = spec.upper;
  milp.integer_mask.assign(size, false);
  for (std::size_t j = 0; j < spec.k; ++j) milp.integer_mask[j] = true;

  const auto& obj = instance.objectives[player];
  lp.objective_offset = obj.constant;
  for (const auto& t : obj.linear) {
    if (own(t.var))
      lp.objective[t.var - off] += t.coeff;
    else
      lp.objective_offset += t.coeff * x[t.var];
  }
  for (const auto& b : obj.bilinear) {
    if (own(b.a))
      lp.objective[b.a - off] += b.coeff * x[b.b];
    else if (own(b.b))
      lp.objective[b.b - off] += b.coeff * x[b.a];
    else
      lp.objective_offset += b.coeff * x[b.a] * x[b.b];
  }

  for (const auto& row : instance.constraints) {
    if (row.owner != player) continue;
    std::vector<double> coeffs(size, 0.0);
    double rhs = row.rhs;
    bool touches_own = false;
    for (const auto& t : row.terms) {
      if (own(t.var)) {
        coeffs[t.var - off] += t.coeff;
        touches_own = touches_own || t.coeff != 0.0;
      } else {
        rhs -= t.coeff * x[t.var];
      }
    }
    if (!touches_own) {
      if (rhs < -options.lp.feasibility_tol * (1.0 + std::abs(row.rhs)))
        throw InfeasibleBestResponse(static_cast<int>(player),
                                     "player " + std::to_string(player) +
                                         " has a rival-only row violated by " +
                                         std::to_string(-rhs));
      continue;
    }
    lp.add_row(std::move(coeffs), RowSense::LessEqual, rhs);
  }

  const MilpSolution sol = solve_milp(milp, options);
  if (sol.status != MilpStatus::Optimal)
    throw InfeasibleBestResponse(static_cast<int>(player),
                                 "player " + std::to_string(player) + " has no feasible strategy");
  BestResponse br;
  br.player = player;
  br.strategy = sol.point;
  br.value = eval_cost(instance, player, replace_block(instance, x, player, br.strategy));
  return br;
}

std::vector<BestResponse> best_responses(const GnepInstance& instance, std::span<const double> x,
                                         const MilpOptions& options) {
  std::vector<BestResponse> out;
  out.reserve(instance.num_players());
  for (std::size_t i = 0; i < instance.num_players(); ++i)
    out.push_back(best_response(instance, i, x, options));
  return out;
}

std::vector<double> stack_responses(const GnepInstance& instance,
                                    std::span<const BestResponse> responses) {
  std::vector<double> y(instance.num_vars(), 0.0);
  for (const auto& br : responses)
    std::copy(br.strategy.begin(), br.strategy.end(),
              y.begin() + static_cast<std::ptrdiff_t>(instance.offset(br.player)));
  return y;
}

double eval_vhat(const GnepInstance& instance, std::span<const double> x,
                 const MilpOptions& options) {
  double v = 0.0;
  for (std::size_t i = 0; i < instance.num_players(); ++i)
    v += eval_cost(instance, i, x) - best_response(instance, i, x, options).value;
  return v;
}

std::vector<double> compute_eta_upper(const GnepInstance& instance) {
  std::vector<double> out;
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    const auto& obj = instance.objectives[i];
    double hi = obj.constant;
    for (const auto& t : obj.linear)
      hi += std::max(t.coeff * instance.lower(t.var), t.coeff * instance.upper(t.var));
    for (const auto& b : obj.bilinear) {
      const double la = instance.lower(b.a), ua = instance.upper(b.a);
      const double lb = instance.lower(b.b), ub = instance.upper(b.b);
      hi += std::max({b.coeff * la * lb, b.coeff * la * ub, b.coeff * ua * lb, b.coeff * ua * ub});
    }
    out.push_back(hi);
  }
  return out;
}

std::vector<double> eta_upper_bounds(const GnepInstance& instance) {
  if (instance.meta.is_object() && instance.meta.contains("eta_upper")) {
    auto v = instance.meta.at("eta_upper").get<std::vector<double>>();
    if (v.size() != instance.num_players())
      throw std::invalid_argument("meta.eta_upper must have one entry per player");
    return v;
  }
  return compute_eta_upper(instance);
}

std::vector<double> compute_eta_lower(const GnepInstance& instance) {
  const std::size_t n = instance.num_vars();
  LpProblem base;
  base.objective.assign(n, 0.0);
  base.lower = instance.lower_bounds();
  base.upper = instance.upper_bounds();
  for (const auto& row : instance.constraints) {
    std::vector<double> coeffs(n, 0.0);
    for (const auto& t : row.terms) coeffs[t.var] += t.coeff;
    base.add_row(std::move(coeffs), RowSense::LessEqual, row.rhs);
  }
  const auto mask = instance.integer_mask();
  std::vector<double> out;
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    LpProblem lp = base;
    const auto& obj = instance.objectives[i];
    lp.objective_offset = obj.constant;
    for (const auto& t : obj.linear) lp.objective[t.var] += t.coeff;
    std::vector<BilinearTerm> terms;
    for (const auto& b : obj.bilinear) terms.push_back({b.a, b.b, b.coeff});
    linearize_bilinear(lp, terms, mask);
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
      throw std::domain_error("compute_eta_lower: relaxation of the joint feasible set is " +
                              std::string(sol.status == LpStatus::Infeasible ? "infeasible"
                                                                             : "unbounded"));
    out.push_back(sol.objective);
  }
  return out;
}

bool is_feasible(const GnepInstance& instance, std::span<const double> x, double tol,
                 double int_tol) {
  if (x.size() != instance.num_vars()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < instance.lower(j) - tol || x[j] > instance.upper(j) + tol) return false;
    if (instance.is_integer(j) && std::abs(x[j] - std::round(x[j])) > int_tol) return false;
  }
  for (const auto& row : instance.constraints) {
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coeff * x[t.var];
    if (lhs > row.rhs + tol * (1.0 + std::abs(row.rhs))) return false;
  }
  return true;
}

}  // namespace gnep
