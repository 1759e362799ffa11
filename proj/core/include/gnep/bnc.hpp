#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gnep/cut_row.hpp"
#include "gnep/lp.hpp"
#include "gnep/milp.hpp"
#include "gnep/model.hpp"
#include "gnep/relaxation.hpp"
#include "gnep/tolerances.hpp"

namespace gnep {

enum class CutStrategy { Equilibrium, Intersection, NoGood, Auto };
enum class SolveStatus { EquilibriumFound, NoEquilibrium, TimeLimit, NodeLimit };

std::string_view to_string(CutStrategy strategy);
std::string_view to_string(SolveStatus status);
/// Throws std::invalid_argument on an unknown name.
CutStrategy parse_cut_strategy(std::string_view name);

struct BoundChange {
  std::size_t var = 0;
  double lower = 0.0;
  double upper = 0.0;
};

struct NodeState {
  std::size_t id = 0;
  std::size_t depth = 0;
  std::vector<BoundChange> bound_changes;
  std::vector<CutRow> local_cuts;
  std::vector<double> lower;  // box after applying bound_changes
  std::vector<double> upper;
};

struct BranchChoice {
  std::size_t var = 0;
  double value = 0.0;
  bool spatial = false;
  bool integer = true;
};

enum class TraceKind {
  NodeSolved,
  Pruned,
  Branched,
  IncumbentRejected,
  CutAdded,
  EquilibriumFound,
  Stalled
};

std::string_view to_string(TraceKind kind);

/// Event passed to the observer. Pointer members are only valid during the
/// callback and are set where noted.
struct TraceEvent {
  TraceKind kind = TraceKind::NodeSolved;
  std::size_t node = 0;
  std::size_t depth = 0;
  LpStatus lp_status = LpStatus::Optimal;
  double value = 0.0;
  std::vector<double> point;                // LP point over (x, eta, z)
  std::optional<BranchChoice> branch;       // Branched
  const CutRow* cut = nullptr;              // CutAdded
  const NodeProblem* problem = nullptr;     // NodeSolved, IncumbentRejected
  const LpSolution* solution = nullptr;     // NodeSolved, IncumbentRejected
  const std::vector<BestResponse>* responses = nullptr;  // IncumbentRejected
  std::vector<std::size_t> cut_players;     // IncumbentRejected
  std::string note;
};

struct SolverConfig {
  CutStrategy cut_strategy = CutStrategy::Auto;
  double time_limit_s = 3600.0;
  std::size_t node_limit = 1'000'000;
  std::size_t cut_budget_per_node = 10'000;
  /// Replaces the per-player equilibrium cuts of a round by their sum.
  bool aggregate_equilibrium_cuts = false;
  /// Right-hand-side relaxation of the NE-free sets.
  double ic_epsilon = 1.0;
  Tolerances tol;
  MilpOptions milp;
  LpOptions lp;
  std::function<void(const TraceEvent&)> observer;
};

struct SolveStats {
  std::size_t nodes_visited = 0;
  std::size_t lp_calls = 0;
  std::size_t milp_calls = 0;
  std::size_t cuts_equilibrium = 0;
  std::size_t cuts_aggregated = 0;
  std::size_t cuts_intersection = 0;
  std::size_t cuts_nogood = 0;
  /// Intersection cuts not produced because every alpha was infinite.
  std::size_t ic_all_infinite = 0;
  /// Other intersection-cut failures (degenerate cone, no interior, ...).
  std::size_t ic_unavailable = 0;
  std::size_t stalled_nodes = 0;
  std::size_t max_depth = 0;
  double wall_time_s = 0.0;
};

struct Equilibrium {
  std::vector<double> x;
  std::vector<double> costs;
  double vhat = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::NoEquilibrium;
  std::optional<Equilibrium> equilibrium;
  SolveStats stats;
};

/// Branch-and-cut search for a pure equilibrium. Depth-first; nodes whose
/// cut loop stalls are abandoned and turn a would-be NoEquilibrium result
/// into NodeLimit. Throws std::invalid_argument when the cut strategy does
/// not apply to the instance.
SolveResult solve(const GnepInstance& instance, const SolverConfig& config = {});

/// Players whose eta exceeds their best-response value by more than `gap`.
std::vector<std::size_t> select_cut_players(std::span<const double> eta,
                                            std::span<const BestResponse> responses,
                                            double gap);

/// Integer branching on the most fractional variable (smallest index on
/// ties); otherwise splits the integer factor of the most violated product
/// at its value (x <= v, x >= v + 1).
std::optional<BranchChoice> choose_branch(const NodeProblem& problem,
                                          std::span<const double> point,
                                          const std::vector<bool>& integer_mask,
                                          const Tolerances& tol);

/// Children (down, up) of `node`; ids are left at 0.
std::pair<NodeState, NodeState> branch(const NodeState& node, const BranchChoice& choice);

struct IncumbentCheck {
  bool is_nash = false;
  double psi = 0.0;
  std::vector<BestResponse> responses;
};

/// Best responses against the rounded profile and the equilibrium test
/// psi <= ne_tol. Propagates InfeasibleBestResponse.
IncumbentCheck check_incumbent(const GnepInstance& instance, std::span<const double> x,
                               const Tolerances& tol, const MilpOptions& milp = {});

}  // namespace gnep
