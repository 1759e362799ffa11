#include "gnep/cuts.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "gnep/errors.hpp"

namespace gnep {

std::string_view to_string(CutKind kind) {
  switch (kind) {
    case CutKind::Equilibrium: return "equilibrium";
    case CutKind::AggregatedEquilibrium: return "aggregated-equilibrium";
    case CutKind::NoGood: return "nogood";
    case CutKind::Intersection: return "intersection";
  }
  return "unknown";
}

double CutRow::violation(std::span<const double> point) const {
  double lhs = 0.0;
  for (std::size_t j = 0; j < coeffs.size() && j < point.size(); ++j) lhs += coeffs[j] * point[j];
  return lhs - rhs;
}

namespace {

/// pi_i(y_i, x_-i) = constant + coeffs^T x, coeffs zero on player i's block.
struct AffineCost {
  std::vector<double> coeffs;
  double constant = 0.0;
};

AffineCost substitute_response(const GnepInstance& instance, std::size_t player,
                               std::span<const double> response) {
  const std::size_t off = instance.offset(player);
  const std::size_t size = instance.players.at(player).size();
  if (response.size() != size)
    throw std::invalid_argument("response length differs from player " + std::to_string(player) +
                                "'s block");
  auto own = [&](std::size_t v) { return v >= off && v < off + size; };

  AffineCost out;
  out.coeffs.assign(instance.num_vars(), 0.0);
  const auto& obj = instance.objectives[player];
  out.constant = obj.constant;
  for (const auto& t : obj.linear) {
    if (own(t.var))
      out.constant += t.coeff * response[t.var - off];
    else
      out.coeffs[t.var] += t.coeff;
  }
  for (const auto& b : obj.bilinear) {
    if (own(b.a) && !own(b.b)) {
      out.coeffs[b.b] += b.coeff * response[b.a - off];
    } else if (own(b.b) && !own(b.a)) {
      out.coeffs[b.a] += b.coeff * response[b.b - off];
    } else if (!own(b.a) && !own(b.b)) {
      if (b.coeff != 0.0)
        throw NotAffineInRivals("cost of player " + std::to_string(player) +
                                " multiplies rival variables " + std::to_string(b.a) + " and " +
                                std::to_string(b.b));
    } else {
      out.constant += b.coeff * response[b.a - off] * response[b.b - off];
    }
  }
  return out;
}

}  // namespace

CutRow equilibrium_cut(const GnepInstance& instance, std::size_t player,
                       std::span<const double> response) {
  if (!instance.standard_nep())
    throw std::invalid_argument("equilibrium cuts need constraints that do not couple players");
  const AffineCost cost = substitute_response(instance, player, response);
  CutRow cut;
  cut.kind = CutKind::Equilibrium;
  cut.scope = CutScope::Global;
  cut.coeffs.assign(instance.num_vars() + instance.num_players(), 0.0);
  for (std::size_t j = 0; j < cost.coeffs.size(); ++j) cut.coeffs[j] = -cost.coeffs[j];
  cut.coeffs[instance.num_vars() + player] = 1.0;
  cut.rhs = cost.constant;
  return cut;
}

CutRow aggregated_equilibrium_cut(const GnepInstance& instance,
                                  std::span<const double> responses) {
  CutRow total;
  total.kind = CutKind::AggregatedEquilibrium;
  total.scope = CutScope::Global;
  total.coeffs.assign(instance.num_vars() + instance.num_players(), 0.0);
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    const auto block = responses.subspan(instance.offset(i), instance.players[i].size());
    const CutRow cut = equilibrium_cut(instance, i, block);
    for (std::size_t j = 0; j < cut.coeffs.size(); ++j) total.coeffs[j] += cut.coeffs[j];
    total.rhs += cut.rhs;
  }
  return total;
}

CutRow no_good_cut(const GnepInstance& instance, std::span<const double> x_star,
                   double int_tol) {
  if (!instance.all_binary())
    throw NonBinaryVariables("no-good cuts need every variable to be binary");
  const std::size_t n = instance.num_vars();
  CutRow cut;
  cut.kind = CutKind::NoGood;
  cut.scope = CutScope::Global;
  cut.coeffs.assign(n + instance.num_players(), 0.0);
  double ones = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = x_star[j];
    if (std::abs(v) <= int_tol) {
      cut.coeffs[j] = -1.0;
    } else if (std::abs(v - 1.0) <= int_tol) {
      cut.coeffs[j] = 1.0;
      ones += 1.0;
    } else {
      throw NonBinaryVariables("variable " + std::to_string(j) + " is not binary at the point");
    }
  }
  cut.rhs = ones - 1.0;
  return cut;
}

bool NeFreeSet::contains(std::span<const double> point, double tol) const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < rows[r].size(); ++j) lhs += rows[r][j] * point[j];
    if (lhs > rhs[r] + tol) return false;
  }
  return true;
}

NeFreeSet build_ne_free_set(const GnepInstance& instance, std::size_t player,
                            std::span<const double> response, std::span<const double> apex,
                            double epsilon) {
  const std::size_t n = instance.num_vars();
  const std::size_t width = n + instance.num_players();
  const std::size_t off = instance.offset(player);
  const std::size_t size = instance.players[player].size();
  auto own = [&](std::size_t v) { return v >= off && v < off + size; };

  NeFreeSet set;
  set.player = player;
  set.epsilon = epsilon;

  const AffineCost cost = substitute_response(instance, player, response);
  std::vector<double> cost_row(width, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost_row[j] = cost.coeffs[j];
  cost_row[n + player] = -1.0;
  set.rows.push_back(std::move(cost_row));
  set.rhs.push_back(-cost.constant);

  for (const auto& row : instance.constraints) {
    if (row.owner != player) continue;
    std::vector<double> coeffs(width, 0.0);
    double rhs = row.rhs + epsilon;
    bool touches_rivals = false;
    for (const auto& t : row.terms) {
      if (own(t.var)) {
        rhs -= t.coeff * response[t.var - off];
      } else {
        coeffs[t.var] += t.coeff;
        touches_rivals = touches_rivals || t.coeff != 0.0;
      }
    }
    if (!touches_rivals) continue;
    set.rows.push_back(std::move(coeffs));
    set.rhs.push_back(rhs);
  }

  for (std::size_t r = 0; r < set.rows.size(); ++r) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < width; ++j) lhs += set.rows[r][j] * apex[j];
    const double slack = set.rhs[r] - lhs;
    if (!(slack > 1e-9))
      throw NotInterior("point is not interior to the NE-free set of player " +
                        std::to_string(player) + " (row " + std::to_string(r) +
                        " slack " + std::to_string(slack) + ")");
  }
  return set;
}

double compute_alpha(std::span<const double> apex, std::span<const double> ray,
                     const NeFreeSet& set) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < set.rows.size(); ++r) {
    double along = 0.0, at = 0.0;
    for (std::size_t j = 0; j < set.rows[r].size(); ++j) {
      along += set.rows[r][j] * ray[j];
      at += set.rows[r][j] * apex[j];
    }
    if (along <= 1e-12) continue;
    alpha = std::min(alpha, (set.rhs[r] - at) / along);
  }
  return alpha;
}

std::vector<double> compute_alphas(const CornerCone& cone, const NeFreeSet& set) {
  std::vector<double> out;
  out.reserve(cone.rays.size());
  for (const auto& ray : cone.rays) out.push_back(compute_alpha(cone.apex, ray, set));
  return out;
}

CutRow intersection_cut(const CornerCone& cone, std::span<const double> alphas) {
  const std::size_t dim = cone.apex.size();
  if (cone.rays.size() != dim || alphas.size() != dim)
    throw SingularRaySystem("ray system is not square (" + std::to_string(cone.rays.size()) +
                            " rays in dimension " + std::to_string(dim) + ")");
  bool any_finite = false;
  Eigen::MatrixXd rays(dim, dim);
  Eigen::VectorXd inv_alpha(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = 0; k < dim; ++k)
      rays(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = cone.rays[j][k];
    const bool finite = std::isfinite(alphas[j]);
    any_finite = any_finite || finite;
    inv_alpha(static_cast<Eigen::Index>(j)) = finite ? 1.0 / alphas[j] : 0.0;
  }
  if (!any_finite) throw NoFiniteAlpha("every ray stays inside the NE-free set");

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(rays);
  if (!(lu.rcond() > 1e-12)) throw SingularRaySystem("cone rays are numerically dependent");
  const Eigen::VectorXd a = lu.solve(inv_alpha);

  CutRow cut;
  cut.kind = CutKind::Intersection;
  cut.scope = CutScope::Subtree;
  cut.coeffs.resize(dim);
  double at_apex = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double ak = a(static_cast<Eigen::Index>(k));
    cut.coeffs[k] = -ak;
    at_apex += ak * cone.apex[k];
  }
  cut.rhs = -(at_apex + 1.0);
  return cut;
}

}  // namespace gnep
