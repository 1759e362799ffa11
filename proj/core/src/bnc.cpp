#include "gnep/bnc.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>

#include "gnep/cuts.hpp"
#include "gnep/errors.hpp"

namespace gnep {

std::string_view to_string(CutStrategy strategy) {
  switch (strategy) {
    case CutStrategy::Equilibrium: return "equilibrium";
    case CutStrategy::Intersection: return "intersection";
    case CutStrategy::NoGood: return "nogood";
    case CutStrategy::Auto: return "auto";
  }
  return "unknown";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::EquilibriumFound: return "EquilibriumFound";
    case SolveStatus::NoEquilibrium: return "NoEquilibrium";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::NodeLimit: return "NodeLimit";
  }
  return "unknown";
}

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::NodeSolved: return "node";
    case TraceKind::Pruned: return "pruned";
    case TraceKind::Branched: return "branch";
    case TraceKind::IncumbentRejected: return "rejected";
    case TraceKind::CutAdded: return "cut";
    case TraceKind::EquilibriumFound: return "equilibrium";
    case TraceKind::Stalled: return "stalled";
  }
  return "unknown";
}

CutStrategy parse_cut_strategy(std::string_view name) {
  if (name == "equilibrium") return CutStrategy::Equilibrium;
  if (name == "intersection") return CutStrategy::Intersection;
  if (name == "nogood") return CutStrategy::NoGood;
  if (name == "auto") return CutStrategy::Auto;
  throw std::invalid_argument("unknown cut strategy '" + std::string(name) + "'");
}

std::vector<std::size_t> select_cut_players(std::span<const double> eta,
                                            std::span<const BestResponse> responses,
                                            double gap) {
  std::vector<std::size_t> out;
  for (const auto& br : responses)
    if (eta[br.player] > br.value + gap) out.push_back(br.player);
  return out;
}

std::optional<BranchChoice> choose_branch(const NodeProblem& problem,
                                          std::span<const double> point,
                                          const std::vector<bool>& integer_mask,
                                          const Tolerances& tol) {
  std::optional<BranchChoice> best;
  double best_frac = tol.integrality;
  for (std::size_t j = 0; j < problem.num_x; ++j) {
    if (!integer_mask[j]) continue;
    const double frac = std::abs(point[j] - std::round(point[j]));
    if (frac > best_frac) {
      best_frac = frac;
      best = BranchChoice{j, point[j], false, true};
    }
  }
  if (best) return best;

  // Products of two continuous variables are refined inside the node
  // relaxation; here only an integer factor sitting strictly inside its
  // domain can leave a product inexact.
  const auto& lp = problem.lp;
  auto is_int = [&](std::size_t v) { return v < integer_mask.size() && integer_mask[v]; };
  double best_gap = tol.product;
  for (const auto& prod : problem.products) {
    if (prod.exact_at_integers || (!is_int(prod.a) && !is_int(prod.b))) continue;
    const double gap = std::abs(point[prod.column] - point[prod.a] * point[prod.b]);
    if (gap <= best_gap) continue;
    std::optional<std::size_t> var;
    double width = -1.0;
    for (std::size_t f : {prod.a, prod.b}) {
      if (!is_int(f)) continue;
      const double v = std::round(point[f]);
      if (v <= lp.lower[f] || v >= lp.upper[f]) continue;
      if (lp.upper[f] - lp.lower[f] > width) {
        width = lp.upper[f] - lp.lower[f];
        var = f;
      }
    }
    if (!var) continue;
    best_gap = gap;
    best = BranchChoice{*var, std::round(point[*var]), true, true};
  }
  return best;
}

std::pair<NodeState, NodeState> branch(const NodeState& node, const BranchChoice& choice) {
  NodeState down = node;
  NodeState up = node;
  down.id = up.id = 0;
  down.depth = up.depth = node.depth + 1;
  const std::size_t j = choice.var;
  double down_upper = choice.value;
  double up_lower = choice.value;
  if (choice.integer) {
    if (choice.spatial) {
      down_upper = choice.value;
      up_lower = choice.value + 1.0;
    } else {
      down_upper = std::floor(choice.value);
      up_lower = std::ceil(choice.value);
    }
  }
  down.upper[j] = down_upper;
  up.lower[j] = up_lower;
  down.bound_changes.push_back({j, down.lower[j], down.upper[j]});
  up.bound_changes.push_back({j, up.lower[j], up.upper[j]});
  return {std::move(down), std::move(up)};
}

IncumbentCheck check_incumbent(const GnepInstance& instance, std::span<const double> x,
                               const Tolerances& tol, const MilpOptions& milp) {
  IncumbentCheck out;
  out.responses = best_responses(instance, x, milp);
  out.psi = eval_psi(instance, x, stack_responses(instance, out.responses));
  out.is_nash = out.psi <= tol.equilibrium;
  return out;
}

namespace {

enum class LogLevel { Off, Info, Trace };

LogLevel log_level() {
  const char* env = std::getenv("GNEP_BNC_LOG");
  if (env == nullptr) return LogLevel::Off;
  const std::string v(env);
  if (v == "trace") return LogLevel::Trace;
  if (v == "info") return LogLevel::Info;
  return LogLevel::Off;
}

class Search {
 public:
  Search(const GnepInstance& instance, const SolverConfig& config)
      : instance_(instance), config_(config), tol_(config.tol), log_(log_level()) {
    milp_ = config.milp;
    milp_.integrality_tol = tol_.integrality;
    strategy_ = config.cut_strategy;
    if (strategy_ == CutStrategy::Auto)
      strategy_ = instance.standard_nep() ? CutStrategy::Equilibrium : CutStrategy::Intersection;
    if (strategy_ == CutStrategy::Equilibrium && !instance.standard_nep())
      throw std::invalid_argument("equilibrium cuts are only valid when no constraint couples players");
    if (strategy_ == CutStrategy::NoGood && !instance.all_binary())
      throw std::invalid_argument("no-good cuts need every variable to be binary");
  }

  SolveResult run() {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    SolveResult result;
    result.status = explore(result, elapsed);
    result.stats = stats_;
    result.stats.wall_time_s = elapsed();
    if (log_ != LogLevel::Off)
      std::cerr << "[gnep] " << to_string(result.status) << " nodes=" << stats_.nodes_visited
                << " lp=" << stats_.lp_calls << " milp=" << stats_.milp_calls
                << " time=" << result.stats.wall_time_s << "s\n";
    return result;
  }

 private:
  template <typename Clock>
  SolveStatus explore(SolveResult& result, Clock&& elapsed) {
    if (!(config_.time_limit_s > 0.0)) return SolveStatus::TimeLimit;
    data_ = prepare_relaxation(instance_);
    stats_.lp_calls += instance_.num_players();

    NodeState root;
    root.lower = instance_.lower_bounds();
    root.upper = instance_.upper_bounds();
    std::vector<NodeState> stack;
    stack.push_back(std::move(root));
    bool abandoned = false;

    while (!stack.empty()) {
      if (stats_.nodes_visited >= config_.node_limit) return SolveStatus::NodeLimit;
      NodeState node = std::move(stack.back());
      stack.pop_back();
      node.id = next_id_++;
      ++stats_.nodes_visited;
      stats_.max_depth = std::max(stats_.max_depth, node.depth);

      const NodeOutcome outcome = process(node, stack, result, elapsed);
      switch (outcome) {
        case NodeOutcome::Found: return SolveStatus::EquilibriumFound;
        case NodeOutcome::TimeUp: return SolveStatus::TimeLimit;
        case NodeOutcome::Stalled:
          abandoned = true;
          ++stats_.stalled_nodes;
          break;
        case NodeOutcome::Done: break;
      }
    }
    return abandoned ? SolveStatus::NodeLimit : SolveStatus::NoEquilibrium;
  }

  enum class NodeOutcome { Done, Found, TimeUp, Stalled };

  template <typename Clock>
  NodeOutcome process(NodeState& node, std::vector<NodeState>& stack, SolveResult& result,
                      Clock&& elapsed) {
    std::size_t cuts_here = 0;
    while (true) {
      if (elapsed() >= config_.time_limit_s) return NodeOutcome::TimeUp;
      std::vector<CutRow> cuts = global_cuts_;
      cuts.insert(cuts.end(), node.local_cuts.begin(), node.local_cuts.end());
      NodeRelaxation rel;
      try {
        rel = solve_node_relaxation(data_, node.lower, node.upper, cuts, tol_.product, config_.lp);
        stats_.lp_calls += rel.lp_solves;
      } catch (const EmptyDomain& e) {
        emit_simple(TraceKind::Pruned, node, e.what());
        return NodeOutcome::Done;
      } catch (const NumericalFailure& e) {
        emit_simple(TraceKind::Stalled, node, e.what());
        return NodeOutcome::Stalled;
      }
      const LpSolution& sol = rel.solution;
      {
        TraceEvent ev = make_event(TraceKind::NodeSolved, node);
        ev.lp_status = rel.status;
        ev.value = rel.value;
        ev.point = sol.point;
        if (rel.status == LpStatus::Optimal) {
          ev.problem = &rel.problem;
          ev.solution = &sol;
        }
        emit(ev);
      }
      if (rel.status != LpStatus::Optimal) {
        emit_simple(TraceKind::Pruned, node, "infeasible");
        return NodeOutcome::Done;
      }
      if (rel.bound > tol_.prune) {
        TraceEvent ev = make_event(TraceKind::Pruned, node);
        ev.value = rel.bound;
        ev.note = "bound";
        emit(ev);
        return NodeOutcome::Done;
      }

      if (auto choice = choose_branch(rel.problem, sol.point, data_.integer_mask, tol_)) {
        auto [down, up] = branch(node, *choice);
        TraceEvent ev = make_event(TraceKind::Branched, node);
        ev.branch = choice;
        ev.value = rel.value;
        emit(ev);
        stack.push_back(std::move(down));
        stack.push_back(std::move(up));
        return NodeOutcome::Done;
      }

      const std::size_t nx = data_.num_x;
      const std::size_t np = data_.num_players;
      const std::vector<double>& full = sol.point;
      const std::vector<double> apex(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(nx + np));
      const std::vector<double> x =
          round_integers(instance_, std::span<const double>(full).first(nx));
      const std::span<const double> eta = std::span<const double>(apex).subspan(nx, np);

      IncumbentCheck check;
      try {
        stats_.milp_calls += np;
        check = check_incumbent(instance_, x, tol_, milp_);
      } catch (const InfeasibleBestResponse& e) {
        emit_simple(TraceKind::Stalled, node, e.what());
        return NodeOutcome::Stalled;
      } catch (const NodeLimitExceeded& e) {
        emit_simple(TraceKind::Stalled, node, e.what());
        return NodeOutcome::Stalled;
      }

      if (check.is_nash) {
        Equilibrium eq;
        eq.x = x;
        for (std::size_t i = 0; i < np; ++i) eq.costs.push_back(eval_cost(instance_, i, x));
        eq.vhat = check.psi;
        result.equilibrium = std::move(eq);
        TraceEvent ev = make_event(TraceKind::EquilibriumFound, node);
        ev.value = check.psi;
        ev.point = x;
        emit(ev);
        return NodeOutcome::Found;
      }

      std::vector<std::size_t> players = select_cut_players(eta, check.responses, tol_.regret_gap);
      if (players.empty())
        players = select_cut_players(eta, check.responses, tol_.cut_violation);
      {
        TraceEvent ev = make_event(TraceKind::IncumbentRejected, node);
        ev.value = check.psi;
        ev.point = full;
        ev.problem = &rel.problem;
        ev.solution = &sol;
        ev.responses = &check.responses;
        ev.cut_players = players;
        emit(ev);
      }

      std::vector<CutRow> fresh = separate(rel, x, check, players);
      std::size_t added = 0;
      for (auto& cut : fresh) {
        const double violation = cut.violation(full);
        if (violation < tol_.cut_violation) continue;
        count(cut);
        ++added;
        TraceEvent ev = make_event(TraceKind::CutAdded, node);
        ev.cut = &cut;
        ev.value = violation;
        emit(ev);
        if (cut.scope == CutScope::Global)
          global_cuts_.push_back(std::move(cut));
        else
          node.local_cuts.push_back(std::move(cut));
      }
      if (added == 0) {
        emit_simple(TraceKind::Stalled, node, "no violated cut at a rejected incumbent");
        return NodeOutcome::Stalled;
      }
      cuts_here += added;
      if (cuts_here > config_.cut_budget_per_node) {
        emit_simple(TraceKind::Stalled, node, "cut budget exhausted");
        return NodeOutcome::Stalled;
      }
    }
  }

  std::vector<CutRow> separate(const NodeRelaxation& rel, const std::vector<double>& x,
                               const IncumbentCheck& check,
                               const std::vector<std::size_t>& players) {
    std::vector<CutRow> out;
    auto response_of = [&](std::size_t i) -> std::span<const double> {
      return check.responses[i].strategy;
    };
    switch (strategy_) {
      case CutStrategy::Equilibrium:
        if (config_.aggregate_equilibrium_cuts) {
          out.push_back(aggregated_equilibrium_cut(
              instance_, stack_responses(instance_, check.responses)));
        } else {
          for (std::size_t i : players) out.push_back(equilibrium_cut(instance_, i, response_of(i)));
        }
        break;
      case CutStrategy::NoGood:
        out.push_back(no_good_cut(instance_, x, tol_.integrality));
        break;
      case CutStrategy::Intersection: {
        std::optional<CornerCone> cone;
        // A cone read off a refined box does not cover the whole node.
        bool cone_failed = rel.boxes > 1;
        bool need_nogood = false;
        for (std::size_t i : players) {
          try {
            if (cone_failed) throw DegenerateBasis("no corner cone at this node");
            if (!cone) {
              cone = extract_corner_cone(rel.solution, rel.problem.lp);
            }
            const NeFreeSet set = build_ne_free_set(instance_, i, response_of(i), cone->apex,
                                                    config_.ic_epsilon);
            out.push_back(intersection_cut(*cone, compute_alphas(*cone, set)));
            continue;
          } catch (const NoFiniteAlpha&) {
            ++stats_.ic_all_infinite;
          } catch (const DegenerateBasis&) {
            cone_failed = true;
            ++stats_.ic_unavailable;
          } catch (const NotInterior&) {
            ++stats_.ic_unavailable;
          } catch (const SingularRaySystem&) {
            ++stats_.ic_unavailable;
          } catch (const NotAffineInRivals&) {
            ++stats_.ic_unavailable;
          }
          if (instance_.standard_nep()) {
            try {
              out.push_back(equilibrium_cut(instance_, i, response_of(i)));
              continue;
            } catch (const NotAffineInRivals&) {
            }
          }
          need_nogood = true;
        }
        if (need_nogood && instance_.all_binary())
          out.push_back(no_good_cut(instance_, x, tol_.integrality));
        break;
      }
      case CutStrategy::Auto: break;
    }
    return out;
  }

  void count(const CutRow& cut) {
    switch (cut.kind) {
      case CutKind::Equilibrium: ++stats_.cuts_equilibrium; break;
      case CutKind::AggregatedEquilibrium: ++stats_.cuts_aggregated; break;
      case CutKind::NoGood: ++stats_.cuts_nogood; break;
      case CutKind::Intersection: ++stats_.cuts_intersection; break;
    }
  }

  TraceEvent make_event(TraceKind kind, const NodeState& node) const {
    TraceEvent ev;
    ev.kind = kind;
    ev.node = node.id;
    ev.depth = node.depth;
    return ev;
  }

  void emit_simple(TraceKind kind, const NodeState& node, std::string note) {
    TraceEvent ev = make_event(kind, node);
    ev.note = std::move(note);
    emit(ev);
  }

  void emit(const TraceEvent& ev) {
    if (log_ == LogLevel::Trace) {
      std::cerr << "[gnep] node " << ev.node << " depth " << ev.depth << ' ' << to_string(ev.kind);
      if (ev.kind == TraceKind::NodeSolved || ev.kind == TraceKind::Pruned ||
          ev.kind == TraceKind::CutAdded || ev.kind == TraceKind::IncumbentRejected)
        std::cerr << " value " << ev.value;
      if (ev.branch) std::cerr << " var " << ev.branch->var << " at " << ev.branch->value;
      if (ev.cut) std::cerr << " kind " << to_string(ev.cut->kind);
      if (!ev.note.empty()) std::cerr << " (" << ev.note << ')';
      std::cerr << '\n';
    }
    if (config_.observer) config_.observer(ev);
  }

  const GnepInstance& instance_;
  const SolverConfig& config_;
  Tolerances tol_;
  LogLevel log_;
  MilpOptions milp_;
  CutStrategy strategy_;
  RelaxationData data_;
  std::vector<CutRow> global_cuts_;
  SolveStats stats_;
  std::size_t next_id_ = 1;
};

}  // namespace

SolveResult solve(const GnepInstance& instance, const SolverConfig& config) {
  instance.validate();
  Search search(instance, config);
  return search.run();
}

}  // namespace gnep
