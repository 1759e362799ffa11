#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gnep/model.hpp"

namespace gnep {

enum class Correlation { Uncorrelated, Weak, Strong };

std::string_view to_string(Correlation c);
/// Accepts "uncorrelated", "weak", "strong"; throws std::invalid_argument.
Correlation parse_correlation(std::string_view name);

struct KnapsackGameParams {
  std::size_t n = 2;
  std::size_t m = 5;
  double capacity_ratio = 0.5;
  Correlation correlation = Correlation::Uncorrelated;
  /// false: only items with even 0-based index are integer.
  bool all_integer = true;
  std::uint64_t seed = 0;
};

/// Players maximize profit plus pairwise interaction on shared items under
/// a private capacity; costs are the negated objective. Weights and
/// uncorrelated profits are uniform in [1, 100], weak profits are w plus a
/// uniform offset in [-10, 10] (at least 1), strong profits are w + 10, and
/// interactions are uniform in [-10, 10]. b_i = round(ratio * sum_j w_ij).
GnepInstance gen_knapsack(const KnapsackGameParams& params);

struct GeneralizedKnapsackParams {
  std::size_t n = 2;
  std::size_t m = 5;
  double capacity_ratio = 0.5;
  Correlation correlation = Correlation::Uncorrelated;
  std::uint64_t seed = 0;
  /// Item availabilities; empty draws each uniformly from {1, ..., n}.
  std::vector<int> availability;
};

/// Binary knapsacks with linear profits and shared item availabilities
/// sum_k x_kj <= c_j, replicated into every player's constraint set.
GnepInstance gen_generalized_knapsack(const GeneralizedKnapsackParams& params);

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
};

struct FlowPlayer {
  std::size_t source = 0;
  std::size_t sink = 0;
  int demand = 0;
  std::vector<double> utility;  // per arc, nonnegative
};

struct ImplementationGameParams {
  std::size_t num_nodes = 0;
  std::vector<Arc> arcs;
  std::vector<FlowPlayer> players;
  std::vector<int> capacity;  // per arc
  std::vector<int> target;    // per arc
  /// Per-arc price cap; empty selects |E| * max utility * max capacity + 1.
  std::vector<double> price_cap;
};

/// Flow players own x_i (one integer per arc) and a participation binary
/// theta_i with A x_i = theta_i b_i; the last player (authority) owns the
/// continuous prices. Variable layout per flow player: arcs, then theta.
/// Throws InvalidGraph for out-of-range or coinciding endpoints or an
/// unreachable sink.
GnepInstance gen_implementation_game(const ImplementationGameParams& params);

struct RandomGraphParams {
  std::size_t num_nodes = 10;
  std::size_t num_layers = 4;
  double density = 0.5;
  std::size_t num_players = 2;
  int max_demand = 2;
  double max_utility = 10.0;
  std::uint64_t seed = 0;
};

/// Random layered DAG; capacities and targets are uniform in
/// [1, max_demand], demands in [1, max_demand], utilities integers in
/// [0, max_utility]. Sources sit in the first layer, sinks in the last.
ImplementationGameParams random_implementation_params(const RandomGraphParams& params);

/// The two-player game with x_11, x_21 integer from the worked run.
GnepInstance appendix_b_fixture();

/// Three players, two binary items each, exactly one item per player and at
/// most two players on item 1. Costs: 1 - x_11 for player 0 and
/// 1 - x_i2 + x_11 for the others; eta upper bounds fixed at 2.
GnepInstance ic_example_fixture();

/// All pure equilibria of an instance whose variables are all integer.
/// Throws TooLarge when the profile count exceeds `cap` and
/// std::invalid_argument for continuous variables.
std::vector<std::vector<double>> enumerate_equilibria(const GnepInstance& instance,
                                                      std::size_t cap = 1'000'000);

/// Flows of value `demand` from source to sink respecting per-arc upper
/// bounds, plus the zero flow. Throws InvalidGraph on a cycle.
std::vector<std::vector<int>> enumerate_flows(const ImplementationGameParams& params,
                                              std::size_t player, std::size_t cap = 100'000);

/// Outcome of the exhaustive implementation-game search.
struct ImplementationOracle {
  bool has_equilibrium = false;
  std::vector<double> witness;  // full profile when one exists
  std::size_t profiles_checked = 0;
};

/// Enumerates flow profiles and decides by LP whether some price vector
/// completes them to an equilibrium. Throws TooLarge past `cap` profiles.
ImplementationOracle implementation_oracle(const ImplementationGameParams& params,
                                           std::size_t cap = 1'000'000);

/// Conditions (i)-(iv) of weak implementation for a profile of the game
/// built from `params`.
struct ImplementationAudit {
  bool load_within_target = false;
  bool players_optimal = false;
  bool complementary_prices = false;
  bool prices_capped = false;
  bool ok() const {
    return load_within_target && players_optimal && complementary_prices && prices_capped;
  }
};

ImplementationAudit audit_implementation(const ImplementationGameParams& params,
                                         const std::vector<double>& profile, double tol = 1e-6);

std::string serialize_instance(const GnepInstance& instance);
/// Throws ParseError naming the offending field.
GnepInstance parse_instance(std::string_view text);
GnepInstance load_instance(const std::filesystem::path& path);
void save_instance(const GnepInstance& instance, const std::filesystem::path& path);

/// Parameters recorded by gen_implementation_game in `meta["graph"]`.
ImplementationGameParams implementation_params_from_meta(const GnepInstance& instance);

}  // namespace gnep
