// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gnep/bnc.hpp"
#include "gnep/cuts.hpp"
#include "gnep/errors.hpp"
#include "gnep/instances.hpp"
#include "support/oracles.hpp"

namespace {

using namespace gnep;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string failures;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    failures += what + "; ";
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool near_vec(std::span<const double> a, std::span<const double> b, double tol) {
  if (a.size() < b.size()) return false;
  for (std::size_t j = 0; j < b.size(); ++j)
    if (std::abs(a[j] - b[j]) > tol) return false;
  return true;
}

std::string fmt(std::span<const double> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < v.size(); ++j) os << (j ? "," : "") << v[j];
  os << ')';
  return os.str();
}

bool same_profile(const std::vector<double>& a, const std::vector<double>& b) {
  return near_vec(a, b, 1e-6) && a.size() == b.size();
}

bool in_set(const std::vector<std::vector<double>>& set, const std::vector<double>& x) {
  return std::any_of(set.begin(), set.end(), [&](const auto& e) { return same_profile(e, x); });
}

void report(int id, const std::string& name, Verdict& v, double secs) {
  std::printf("[%s] criterion %d %s: %s%s (%.2f s)\n", v.pass ? "PASS" : "FAIL", id, name.c_str(),
              v.failures.c_str(), v.detail.str().c_str(), secs);
  std::fflush(stdout);
}

// ---------------------------------------------------------------------------

bool criterion_appendix_b() {
  const auto t0 = Clock::now();
  Verdict v;
  const auto inst = appendix_b_fixture();

  struct Solved {
    std::size_t node;
    double value;
    std::vector<double> point;
    double x21_lower;
  };
  std::vector<Solved> solved;
  std::vector<std::pair<std::size_t, std::size_t>> branches;  // node, var
  std::vector<std::pair<std::size_t, CutRow>> cuts;

  SolverConfig cfg;
  cfg.observer = [&](const TraceEvent& e) {
    if (e.kind == TraceKind::NodeSolved)
      solved.push_back({e.node, e.value, e.point, e.problem ? e.problem->lp.lower[2] : -1.0});
    if (e.kind == TraceKind::Branched) branches.emplace_back(e.node, e.branch->var);
    if (e.kind == TraceKind::CutAdded) cuts.emplace_back(e.node, *e.cut);
  };
  const auto res = solve(inst, cfg);
  const double secs = seconds_since(t0);

  const std::vector<double> root_point{0, 1, 5.0 / 9.0, 1, 0, 0};
  v.require(!solved.empty() && solved[0].node == 1 &&
                std::abs(solved[0].value + 194.0 / 9.0) <= 1e-6 &&
                near_vec(solved[0].point, root_point, 1e-6),
            "root LP mismatch");
  v.require(!branches.empty() && branches[0] == std::make_pair<std::size_t, std::size_t>(1, 2),
            "first branch is not on x21 at the root");

  const std::vector<double> node_point{0, 1, 1, 0.5, 0, 0};
  const auto child = std::find_if(solved.begin(), solved.end(), [](const Solved& s) {
    return s.node == 2;
  });
  v.require(child != solved.end() && child->x21_lower == 1.0 &&
                std::abs(child->value + 19.0) <= 1e-6 && near_vec(child->point, node_point, 1e-6),
            "node {x21=1} mismatch");

  const std::vector<double> cut1{0, 0, 1, 0, 1, 0}, cut2{1, 2, 0, 0, 0, 1};
  auto has_cut = [&](const std::vector<double>& coeffs, double rhs) {
    return std::any_of(cuts.begin(), cuts.end(), [&](const auto& c) {
      return c.first == 2 && c.second.kind == CutKind::Equilibrium &&
             c.second.coeffs.size() == coeffs.size() && near_vec(c.second.coeffs, coeffs, 1e-9) &&
             std::abs(c.second.rhs - rhs) <= 1e-9;
    });
  };
  v.require(cuts.size() == 2 && has_cut(cut1, -2.0) && has_cut(cut2, -14.5),
            "equilibrium cuts mismatch");

  const auto resolve = std::find_if(child == solved.end() ? solved.end() : child + 1, solved.end(),
                                    [](const Solved& s) { return s.node == 2; });
  v.require(resolve != solved.end() && std::abs(resolve->value) <= 1e-6, "re-solve value is not 0");

  v.require(res.status == SolveStatus::EquilibriumFound && res.equilibrium &&
                near_vec(res.equilibrium->x, std::vector<double>{1, 0, 1, 0.5}, 1e-9) &&
                near_vec(res.equilibrium->costs, std::vector<double>{-3, -15.5}, 1e-9),
            "returned equilibrium mismatch");
  v.require(secs < 1.0, "runtime above 1 s");

  v.detail << "root " << (solved.empty() ? NAN : solved[0].value) << ", node 2 "
           << (child == solved.end() ? NAN : child->value) << ", cuts " << cuts.size()
           << ", NE " << (res.equilibrium ? fmt(res.equilibrium->x) : "none") << " costs "
           << (res.equilibrium ? fmt(res.equilibrium->costs) : "none");
  report(1, "appendix-b golden replay", v, secs);
  return v.pass;
}

// ---------------------------------------------------------------------------

std::vector<double> normalized(const CutRow& cut, std::size_t width) {
  std::vector<double> w(cut.coeffs.begin(),
                        cut.coeffs.begin() + static_cast<long>(std::min(width, cut.coeffs.size())));
  w.resize(width, 0.0);
  w.push_back(cut.rhs);
  double norm = 0.0;
  for (double c : w) norm += c * c;
  norm = std::sqrt(norm);
  for (double& c : w) c /= norm;
  return w;
}

bool criterion_ic_example() {
  const auto t0 = Clock::now();
  Verdict v;
  const auto inst = ic_example_fixture();

  std::vector<double> root_incumbent;
  std::vector<CutRow> root_ics;
  SolverConfig cfg;
  cfg.cut_strategy = CutStrategy::Intersection;
  cfg.observer = [&](const TraceEvent& e) {
    if (e.node != 1) return;
    if (e.kind == TraceKind::IncumbentRejected && root_incumbent.empty()) root_incumbent = e.point;
    if (e.kind == TraceKind::CutAdded && e.cut->kind == CutKind::Intersection)
      root_ics.push_back(*e.cut);
  };
  const auto res = solve(inst, cfg);
  const double secs = seconds_since(t0);

  const std::vector<double> apex{0, 1, 0, 1, 0, 1, 2, 2, 2};
  v.require(near_vec(root_incumbent, apex, 1e-9), "root incumbent is not x_i=(0,1), eta=(2,2,2)");

  // eta_1 <= x_11 + x_21 + x_31 as coeffs^T (x, eta) <= rhs.
  const CutRow published{{-1, 0, -1, 0, -1, 0, 1, 0, 0}, 0.0, CutKind::Intersection,
                         CutScope::Subtree};
  const auto want = normalized(published, 9);
  const CutRow* player1 = nullptr;
  for (const auto& c : root_ics) {
    const auto w = normalized(c, 9);
    if (w[6] > 1e-9 && std::abs(w[7]) <= 1e-9 && std::abs(w[8]) <= 1e-9) {
      player1 = &c;
      break;
    }
  }
  v.require(player1 != nullptr, "no intersection cut on eta_1 at the root");
  if (player1) {
    const auto got = normalized(*player1, 9);
    double dist = 0.0;
    for (std::size_t j = 0; j < got.size(); ++j) dist = std::max(dist, std::abs(got[j] - want[j]));
    v.require(dist <= 1e-6, "cut differs from eta_1 <= x_11 + x_21 + x_31 (max diff " +
                                std::to_string(dist) + ")");
    v.detail << "obtained " << fmt(got) << " expected " << fmt(want) << "; ";
  }
  v.require(secs < 1.0, "runtime above 1 s");
  v.detail << "solve status " << to_string(res.status);
  report(2, "intersection-cut example replay", v, secs);
  return v.pass;
}

// ---------------------------------------------------------------------------

struct CorpusEntry {
  std::string name;
  GnepInstance instance;
};

std::vector<CorpusEntry> oracle_corpus() {
  std::vector<CorpusEntry> out;
  const Correlation corr[] = {Correlation::Uncorrelated, Correlation::Weak, Correlation::Strong};
  for (std::size_t n = 2; n <= 3; ++n)
    for (std::size_t m = 4; m <= 6; ++m)
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const double ratio = seed % 2 ? 0.2 : 0.5;
        out.push_back({"gk-n" + std::to_string(n) + "-m" + std::to_string(m) + "-s" +
                           std::to_string(seed),
                       gen_generalized_knapsack({n, m, ratio, corr[seed % 3], 1000 + seed, {}})});
      }
  const double ratios[] = {0.2, 0.5, 0.8};
  for (std::size_t m = 4; m <= 6; ++m)
    for (std::uint64_t seed = 0; seed < 30; ++seed)
      out.push_back({"kn-m" + std::to_string(m) + "-s" + std::to_string(seed),
                     gen_knapsack({2, m, ratios[seed % 3], corr[(seed / 3) % 3], true, 2000 + seed})});
  return out;
}

struct CutAudit {
  std::size_t checked[4] = {0, 0, 0, 0};
  std::size_t invalid = 0;
  std::size_t weak = 0;
  std::string first_problem;
};

/// Runs one solve and checks every emitted cut against the oracle NE set.
SolveResult audited_solve(const CorpusEntry& entry, CutStrategy strategy, bool aggregate,
                          double time_limit, const std::vector<std::vector<double>>& eqs,
                          CutAudit& audit) {
  const auto& inst = entry.instance;
  SolverConfig cfg;
  cfg.cut_strategy = strategy;
  cfg.aggregate_equilibrium_cuts = aggregate;
  cfg.time_limit_s = time_limit;
  std::vector<double> incumbent;
  std::vector<double> box_lower, box_upper;
  std::vector<ProductColumn> products;
  std::size_t columns = 0;
  cfg.observer = [&](const TraceEvent& e) {
    if (e.kind == TraceKind::IncumbentRejected) {
      incumbent = e.point;
      box_lower = e.problem->lp.lower;
      box_upper = e.problem->lp.upper;
      products = e.problem->products;
      columns = e.problem->lp.num_vars();
      return;
    }
    if (e.kind != TraceKind::CutAdded) return;
    const CutRow& cut = *e.cut;
    ++audit.checked[static_cast<int>(cut.kind)];
    if (cut.violation(incumbent) < 5e-6) {
      ++audit.weak;
      if (audit.first_problem.empty())
        audit.first_problem = entry.name + ": cut violates its incumbent by less than 5e-6";
    }
    for (const auto& x : eqs) {
      if (cut.scope == CutScope::Subtree) {
        bool inside = true;
        for (std::size_t j = 0; j < x.size(); ++j)
          inside = inside && x[j] >= box_lower[j] - 1e-9 && x[j] <= box_upper[j] + 1e-9;
        if (!inside) continue;
      }
      std::vector<double> p(std::max(columns, x.size() + inst.num_players()), 0.0);
      std::copy(x.begin(), x.end(), p.begin());
      for (std::size_t i = 0; i < inst.num_players(); ++i) p[x.size() + i] = eval_cost(inst, i, x);
      for (const auto& pc : products) p[pc.column] = x[pc.a] * x[pc.b];
      if (cut.violation(p) > 1e-7) {
        ++audit.invalid;
        if (audit.first_problem.empty())
          audit.first_problem = entry.name + ": " + std::string(to_string(cut.kind)) +
                                " cut removes the equilibrium " + fmt(x);
      }
    }
  };
  return solve(inst, cfg);
}

bool criteria_oracle_and_cuts() {
  const auto t0 = Clock::now();
  Verdict v3, v4;
  const auto corpus = oracle_corpus();
  std::size_t with_ne = 0, mismatched = 0, extra_runs = 0, extra_mismatched = 0, extra_limits = 0;
  std::string first_mismatch;
  CutAudit audit;
  for (const auto& entry : corpus) {
    const auto eqs = enumerate_equilibria(entry.instance);
    if (!eqs.empty()) ++with_ne;
    // The default configuration decides the criterion; the other cut
    // families run with a short limit to widen the cut audit, and any
    // definitive answer they give must agree with the oracle as well.
    std::vector<std::pair<CutStrategy, bool>> runs{{CutStrategy::Auto, false},
                                                   {CutStrategy::Intersection, false},
                                                   {CutStrategy::NoGood, false}};
    if (entry.instance.standard_nep()) {
      runs.emplace_back(CutStrategy::Equilibrium, false);
      runs.emplace_back(CutStrategy::Equilibrium, true);
    }
    for (const auto& [strategy, aggregate] : runs) {
      const bool primary = strategy == CutStrategy::Auto;
      const auto res =
          audited_solve(entry, strategy, aggregate, primary ? 60.0 : 5.0, eqs, audit);
      const bool definitive =
          res.status == SolveStatus::EquilibriumFound || res.status == SolveStatus::NoEquilibrium;
      bool ok = definitive && (res.status == SolveStatus::EquilibriumFound) == !eqs.empty();
      if (ok && res.equilibrium) ok = in_set(eqs, round_integers(entry.instance, res.equilibrium->x));
      if (!primary) {
        ++extra_runs;
        if (!definitive) {
          ++extra_limits;
          continue;
        }
      }
      if (ok) continue;
      ++(primary ? mismatched : extra_mismatched);
      if (first_mismatch.empty())
        first_mismatch = entry.name + " (" + std::string(to_string(strategy)) + "): " +
                         std::string(to_string(res.status)) + " vs " +
                         std::to_string(eqs.size()) + " oracle equilibria";
    }
  }
  const double secs = seconds_since(t0);

  v3.require(corpus.size() >= 200, "corpus smaller than 200");
  v3.require(mismatched + extra_mismatched == 0,
             std::to_string(mismatched + extra_mismatched) + " mismatches, first " + first_mismatch);
  v3.require(secs < 600.0, "runtime above 10 min");
  v3.detail << corpus.size() << " instances (" << with_ne << " with an equilibrium), default "
            << "strategy mismatches " << mismatched << "; " << extra_runs
            << " extra solves with other cut families: " << extra_mismatched << " mismatches, "
            << extra_limits << " stopped at the 5 s limit";
  report(3, "oracle equivalence", v3, secs);

  v4.require(audit.invalid == 0, std::to_string(audit.invalid) + " invalid cuts, first " +
                                     audit.first_problem);
  v4.require(audit.weak == 0, std::to_string(audit.weak) + " cuts below the violation threshold");
  v4.detail << "checked " << audit.checked[0] << " equilibrium, " << audit.checked[1]
            << " aggregated, " << audit.checked[2] << " no-good, " << audit.checked[3]
            << " intersection cuts";
  report(4, "cut validity", v4, secs);
  return v3.pass && v4.pass;
}

// ---------------------------------------------------------------------------

bool criterion_dominance() {
  const auto t0 = Clock::now();
  Verdict v;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t events = 0, samples = 0, counterexamples = 0, ic_cut_points = 0;

  for (std::uint64_t seed = 0; events < 60 && seed < 200; ++seed) {
    const auto inst =
        gen_knapsack({2, 4 + seed % 3, 0.5, static_cast<Correlation>(seed % 3), true, 3000 + seed});
    SolverConfig cfg;
    cfg.cut_strategy = CutStrategy::Intersection;
    cfg.time_limit_s = 60.0;
    cfg.observer = [&](const TraceEvent& e) {
      if (e.kind != TraceKind::IncumbentRejected || events >= 60) return;
      const NodeProblem& problem = *e.problem;
      CornerCone cone;
      try {
        cone = extract_corner_cone(*e.solution, problem.lp);
      } catch (const DegenerateBasis&) {
        return;
      }
      for (std::size_t i : e.cut_players) {
        const auto& y = (*e.responses)[i].strategy;
        CutRow ic;
        try {
          const auto set = build_ne_free_set(inst, i, y, cone.apex, cfg.ic_epsilon);
          ic = intersection_cut(cone, compute_alphas(cone, set));
        } catch (const Error&) {
          continue;
        }
        const CutRow eq = equilibrium_cut(inst, i, y);
        ++events;

        // Vertices of F_t from random objectives, then points between the
        // apex and those vertices, biased toward the apex.
        std::vector<std::vector<double>> vertices;
        for (int k = 0; k < 30; ++k) {
          LpProblem probe = problem.lp;
          for (auto& c : probe.objective) c = u(rng) * 2.0 - 1.0;
          const auto sol = solve_lp(probe);
          if (sol.status == LpStatus::Optimal) vertices.push_back(sol.point);
        }
        for (int k = 0; k < 1000; ++k) {
          std::vector<double> p = cone.apex;
          if (!vertices.empty()) {
            const auto& a = vertices[rng() % vertices.size()];
            const auto& b = vertices[rng() % vertices.size()];
            const double s = u(rng), t = std::pow(u(rng), 3.0);
            for (std::size_t j = 0; j < p.size(); ++j)
              p[j] = (1 - t) * cone.apex[j] + t * (s * a[j] + (1 - s) * b[j]);
          }
          ++samples;
          const bool ic_cuts = ic.violation(p) > 1e-9;
          const bool eq_cuts = eq.violation(p) > 1e-9;
          if (ic_cuts) ++ic_cut_points;
          if (ic_cuts && !eq_cuts) ++counterexamples;
        }
      }
    };
    solve(inst, cfg);
  }
  const double secs = seconds_since(t0);
  v.require(events >= 50, "only " + std::to_string(events) + " separation events");
  v.require(counterexamples == 0, std::to_string(counterexamples) + " points cut only by the IC");
  v.detail << events << " events, " << samples << " samples, " << ic_cut_points
           << " cut by the IC, " << counterexamples << " cut by the IC alone";
  report(5, "equilibrium cut dominates the intersection cut", v, secs);
  return v.pass;
}

// ---------------------------------------------------------------------------

bool criterion_knapsack_trend() {
  const auto t0 = Clock::now();
  Verdict v;
  const double ratios[] = {0.2, 0.5, 0.8};
  const Correlation corr[] = {Correlation::Uncorrelated, Correlation::Weak, Correlation::Strong};
  for (std::size_t m : {5, 10, 15}) {
    std::size_t solved = 0, total = 0;
    double worst = 0.0;
    for (double ratio : ratios)
      for (auto c : corr)
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
          const auto inst = gen_knapsack({2, m, ratio, c, true, seed});
          SolverConfig cfg;
          cfg.time_limit_s = 60.0;
          const auto res = solve(inst, cfg);
          ++total;
          worst = std::max(worst, res.stats.wall_time_s);
          if (res.status == SolveStatus::EquilibriumFound ||
              res.status == SolveStatus::NoEquilibrium)
            ++solved;
        }
    v.require(solved * 100 >= 95 * total,
              "m=" + std::to_string(m) + " solved " + std::to_string(solved) + "/" +
                  std::to_string(total));
    v.detail << "m=" << m << ": " << solved << "/" << total << " (slowest " << worst << " s) ";
  }
  report(6, "knapsack game solve rate", v, seconds_since(t0));
  return v.pass;
}

// ---------------------------------------------------------------------------

bool criterion_implementation() {
  const auto t0 = Clock::now();
  Verdict v;
  std::size_t found = 0, none = 0, limits = 0, audit_fail = 0, confirmed = 0, contradicted = 0,
              too_large = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomGraphParams g;
    g.seed = 5000 + seed;
    const auto params = random_implementation_params(g);
    const auto inst = gen_implementation_game(params);
    SolverConfig cfg;
    cfg.time_limit_s = 60.0;
    const auto res = solve(inst, cfg);
    if (res.status == SolveStatus::EquilibriumFound) {
      ++found;
      if (!audit_implementation(params, res.equilibrium->x).ok()) ++audit_fail;
    } else if (res.status == SolveStatus::NoEquilibrium) {
      ++none;
      try {
        const auto o = implementation_oracle(params);
        (o.has_equilibrium ? contradicted : confirmed)++;
      } catch (const TooLarge&) {
        ++too_large;
      }
    } else {
      ++limits;
    }
  }
  v.require(audit_fail == 0, std::to_string(audit_fail) + " equilibria fail the audit");
  v.require(contradicted == 0, std::to_string(contradicted) + " NoEquilibrium results contradicted");
  v.detail << "30 graphs: " << found << " found (all audited), " << none << " none (" << confirmed
           << " confirmed, " << too_large << " too large to enumerate), " << limits << " at limits";
  report(7, "implementation game audit", v, seconds_since(t0));
  return v.pass;
}

// ---------------------------------------------------------------------------

bool criterion_numerics() {
  const auto t0 = Clock::now();
  Verdict v;
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // Regret sign on sampled feasible profiles.
  std::vector<GnepInstance> pool;
  for (const auto& e : oracle_corpus()) pool.push_back(e.instance);
  for (std::uint64_t s = 0; s < 10; ++s)
    pool.push_back(gen_knapsack({2, 5, 0.5, Correlation::Weak, false, 6000 + s}));
  pool.push_back(appendix_b_fixture());
  std::size_t profiles = 0, negative = 0;
  double min_vhat = INFINITY;
  for (std::size_t k = 0; profiles < 10000 && k < 2'000'000; ++k) {
    const auto& inst = pool[k % pool.size()];
    std::vector<double> x(inst.num_vars());
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double lo = inst.lower(j), hi = inst.upper(j);
      x[j] = inst.is_integer(j) ? std::floor(lo + u(rng) * (hi - lo + 1)) : lo + u(rng) * (hi - lo);
      x[j] = std::min(x[j], hi);
    }
    if (!is_feasible(inst, x)) continue;
    ++profiles;
    const double vh = eval_vhat(inst, x);
    min_vhat = std::min(min_vhat, vh);
    if (vh < -1e-9) ++negative;
  }
  v.require(profiles >= 10000, "only " + std::to_string(profiles) + " feasible profiles sampled");
  v.require(negative == 0, std::to_string(negative) + " profiles with negative regret");

  // Bitwise LP determinism on node problems and whole solves.
  std::size_t lp_runs = 0, lp_diff = 0;
  for (const auto& inst : pool) {
    const auto data = prepare_relaxation(inst);
    const auto problem = build_node_problem(data, inst.lower_bounds(), inst.upper_bounds(), {});
    const auto a = solve_lp(problem.lp), b = solve_lp(problem.lp);
    ++lp_runs;
    if (a.status != b.status || a.point.size() != b.point.size() ||
        std::memcmp(a.point.data(), b.point.data(), a.point.size() * sizeof(double)) != 0 ||
        std::memcmp(&a.objective, &b.objective, sizeof(double)) != 0)
      ++lp_diff;
  }
  std::size_t solve_diff = 0;
  for (std::size_t k = 0; k < 20; ++k) {
    const auto& inst = pool[k * 7 % pool.size()];
    const auto a = solve(inst), b = solve(inst);
    const bool same = a.status == b.status && a.stats.nodes_visited == b.stats.nodes_visited &&
                      a.stats.lp_calls == b.stats.lp_calls &&
                      a.equilibrium.has_value() == b.equilibrium.has_value() &&
                      (!a.equilibrium || std::memcmp(a.equilibrium->x.data(), b.equilibrium->x.data(),
                                                     a.equilibrium->x.size() * sizeof(double)) == 0);
    if (!same) ++solve_diff;
  }
  v.require(lp_diff == 0, std::to_string(lp_diff) + " LP reruns differ");
  v.require(solve_diff == 0, std::to_string(solve_diff) + " solve reruns differ");

  // MILP against enumeration.
  std::size_t milp_diff = 0, milp_feasible = 0;
  std::uniform_int_distribution<int> coef(-6, 6), ub(1, 3), rhs(0, 8);
  for (int t = 0; t < 50; ++t) {
    MilpProblem p;
    const std::size_t n_int = 3, n_cont = static_cast<std::size_t>(t % 3);
    for (std::size_t j = 0; j < n_int + n_cont; ++j) {
      p.base.add_var(0, ub(rng), coef(rng));
      p.integer_mask.push_back(j < n_int);
    }
    for (int r = 0; r < 3; ++r) {
      std::vector<double> a(n_int + n_cont);
      for (auto& c : a) c = coef(rng);
      p.base.add_row(a, RowSense::LessEqual, rhs(rng));
    }
    const auto got = solve_milp(p);
    const auto ref = oracle::milp_by_enumeration(p);
    if (ref) ++milp_feasible;
    if ((got.status == MilpStatus::Optimal) != ref.has_value() ||
        (ref && std::abs(got.objective - ref->objective) > 1e-7))
      ++milp_diff;
  }
  v.require(milp_diff == 0, std::to_string(milp_diff) + " MILPs disagree with enumeration");

  v.detail << profiles << " profiles (min regret " << min_vhat << "), " << lp_runs
           << " LP reruns, 20 solve reruns, 50 MILPs (" << milp_feasible << " feasible), "
           << lp_diff + solve_diff + milp_diff << " differences";
  report(8, "numerical invariants", v, seconds_since(t0));
  return v.pass;
}

}  // namespace

int main() {
  int failed = 0;
  failed += !criterion_appendix_b();
  failed += !criterion_ic_example();
  failed += !criteria_oracle_and_cuts() ? 1 : 0;
  failed += !criterion_dominance();
  failed += !criterion_knapsack_trend();
  failed += !criterion_implementation();
  failed += !criterion_numerics();
  std::printf("%s\n", failed ? "acceptance: FAILED" : "acceptance: all criteria passed");
  return failed ? 1 : 0;
}
