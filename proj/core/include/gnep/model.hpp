#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnep/milp.hpp"

namespace gnep {

/// Sparse coefficient on a global variable index.
struct Term {
  std::size_t var = 0;
  double coeff = 0.0;
  bool operator==(const Term&) const = default;
};

/// Strategy block of one player: the first `k` variables are integer, the
/// remaining `l` continuous.
struct PlayerSpec {
  std::size_t k = 0;
  std::size_t l = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t size() const { return k + l; }
  bool operator==(const PlayerSpec&) const = default;
};

/// sum(terms) <= rhs, part of g_owner.
struct ConstraintRow {
  std::size_t owner = 0;
  std::vector<Term> terms;
  double rhs = 0.0;
  bool operator==(const ConstraintRow&) const = default;
};

struct Bilinear {
  std::size_t a = 0;
  std::size_t b = 0;
  double coeff = 0.0;
  bool operator==(const Bilinear&) const = default;
};

struct CostFunction {
  double constant = 0.0;
  std::vector<Term> linear;
  std::vector<Bilinear> bilinear;
  bool operator==(const CostFunction&) const = default;
};

/// A game with linear constraints and bilinear costs. Variables are indexed
/// globally, player 0's block first. Metadata keys understood by the solver:
/// "eta_upper" (array overriding the interval bound on costs).
struct GnepInstance {
  std::string family;
  std::vector<PlayerSpec> players;
  std::vector<ConstraintRow> constraints;
  std::vector<CostFunction> objectives;
  nlohmann::json meta = nlohmann::json::object();

  bool operator==(const GnepInstance&) const = default;

  std::size_t num_players() const { return players.size(); }
  std::size_t num_vars() const;
  std::size_t offset(std::size_t player) const;
  std::size_t owner_of(std::size_t var) const;
  bool is_integer(std::size_t var) const;
  double lower(std::size_t var) const;
  double upper(std::size_t var) const;
  std::vector<bool> integer_mask() const;
  std::vector<double> lower_bounds() const;
  std::vector<double> upper_bounds() const;

  /// True iff every constraint only involves its owner's variables.
  bool standard_nep() const;
  /// True iff every variable is integer with bounds inside [0, 1].
  bool all_binary() const;

  /// Throws std::invalid_argument on inconsistent sizes, non-finite data,
  /// infinite bounds, bad indices, or products of two variables of the
  /// same player.
  void validate() const;
};

/// Copy of `x` with every integer variable rounded to the nearest integer.
std::vector<double> round_integers(const GnepInstance& instance, std::span<const double> x);

/// pi_i(x), products evaluated exactly.
double eval_cost(const GnepInstance& instance, std::size_t player, std::span<const double> x);

/// Profile equal to `x` except that player i's block is taken from `block`.
std::vector<double> replace_block(const GnepInstance& instance, std::span<const double> x,
                                  std::size_t player, std::span<const double> block);

/// Nikaido-Isoda function: sum_i pi_i(x) - sum_i pi_i(y_i, x_-i).
double eval_psi(const GnepInstance& instance, std::span<const double> x, std::span<const double> y);

struct BestResponse {
  std::size_t player = 0;
  std::vector<double> strategy;  // player block only
  double value = 0.0;
};

/// Optimal strategy of one player against the rivals in `x`, to zero gap.
/// Throws InfeasibleBestResponse when no feasible strategy exists.
BestResponse best_response(const GnepInstance& instance, std::size_t player,
                           std::span<const double> x, const MilpOptions& options = {});

std::vector<BestResponse> best_responses(const GnepInstance& instance, std::span<const double> x,
                                         const MilpOptions& options = {});

/// Stacks the player blocks of `responses` into one profile.
std::vector<double> stack_responses(const GnepInstance& instance,
                                    std::span<const BestResponse> responses);

/// Sum of regrets sum_i pi_i(x) - Phi_i(x_-i).
double eval_vhat(const GnepInstance& instance, std::span<const double> x,
                 const MilpOptions& options = {});

/// Upper bound on every player's cost over the variable box, by interval
/// arithmetic.
std::vector<double> compute_eta_upper(const GnepInstance& instance);

/// `meta["eta_upper"]` when present, otherwise compute_eta_upper.
std::vector<double> eta_upper_bounds(const GnepInstance& instance);

/// Lower bound on every player's cost: the LP minimum of pi_i over the
/// continuous relaxation of the joint feasible set, products replaced by
/// their McCormick envelopes.
std::vector<double> compute_eta_lower(const GnepInstance& instance);

/// Feasibility of `x` for all rows and bounds within `tol`; integrality is
/// checked separately against `int_tol`.
bool is_feasible(const GnepInstance& instance, std::span<const double> x, double tol = 1e-9,
                 double int_tol = 1e-6);

}  // namespace gnep
