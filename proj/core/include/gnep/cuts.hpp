#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gnep/cut_row.hpp"
#include "gnep/lp.hpp"
#include "gnep/model.hpp"

namespace gnep {

/// eta_i - pi_i(y_i, x_-i) <= 0. Throws NotAffineInRivals when player i's
/// cost multiplies two rival variables, and std::invalid_argument when the
/// instance has constraints coupling players.
CutRow equilibrium_cut(const GnepInstance& instance, std::size_t player,
                       std::span<const double> response);

/// Sum of the equilibrium cuts of all players; `responses` stacks every
/// player's strategy.
CutRow aggregated_equilibrium_cut(const GnepInstance& instance,
                                  std::span<const double> responses);

/// Excludes exactly the binary point `x_star`. Throws NonBinaryVariables
/// unless every variable is binary and `x_star` is integral.
CutRow no_good_cut(const GnepInstance& instance, std::span<const double> x_star,
                   double int_tol = 1e-6);

/// Polyhedron {p : rows[r]^T p <= rhs[r]} over (x, eta).
struct NeFreeSet {
  std::size_t player = 0;
  double epsilon = 1.0;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;

  bool contains(std::span<const double> point, double tol = 0.0) const;
};

/// {eta_i >= pi_i(y_i, x_-i)} intersected with player i's own rows, y_i
/// substituted, right-hand sides relaxed by epsilon. Rows that do not
/// depend on (x_-i, eta_i) are dropped. Throws NotInterior if `apex` is not
/// strictly inside, and NotAffineInRivals as equilibrium_cut does.
NeFreeSet build_ne_free_set(const GnepInstance& instance, std::size_t player,
                            std::span<const double> response, std::span<const double> apex,
                            double epsilon = 1.0);

/// Largest step along `ray` from `apex` that stays in the set;
/// +infinity when no row is ever left.
double compute_alpha(std::span<const double> apex, std::span<const double> ray,
                     const NeFreeSet& set);

std::vector<double> compute_alphas(const CornerCone& cone, const NeFreeSet& set);

/// Solves r_j^T a = 1 / alpha_j over the cone rays and returns
/// (a^T apex + 1) - a^T p <= 0. Throws SingularRaySystem when the rays are
/// numerically dependent and NoFiniteAlpha when every alpha is infinite.
CutRow intersection_cut(const CornerCone& cone, std::span<const double> alphas);

}  // namespace gnep
