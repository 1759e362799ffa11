#include "gnep/instances.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>

#include "gnep/errors.hpp"

namespace gnep {

std::string_view to_string(Correlation c) {
  switch (c) {
    case Correlation::Uncorrelated: return "uncorrelated";
    case Correlation::Weak: return "weak";
    case Correlation::Strong: return "strong";
  }
  return "unknown";
}

Correlation parse_correlation(std::string_view name) {
  if (name == "uncorrelated") return Correlation::Uncorrelated;
  if (name == "weak") return Correlation::Weak;
  if (name == "strong") return Correlation::Strong;
  throw std::invalid_argument("unknown correlation '" + std::string(name) + "'");
}

namespace {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

struct ItemData {
  std::vector<int> weight;
  std::vector<int> profit;
};

ItemData draw_items(Rng& rng, std::size_t m, Correlation corr) {
  ItemData d;
  for (std::size_t j = 0; j < m; ++j) {
    const int w = uniform_int(rng, 1, 100);
    int p = 0;
    switch (corr) {
      case Correlation::Uncorrelated: p = uniform_int(rng, 1, 100); break;
      case Correlation::Weak: p = std::max(1, w + uniform_int(rng, -10, 10)); break;
      case Correlation::Strong: p = w + 10; break;
    }
    d.weight.push_back(w);
    d.profit.push_back(p);
  }
  return d;
}

double capacity(const std::vector<int>& weights, double ratio) {
  double total = 0.0;
  for (int w : weights) total += w;
  return std::round(ratio * total);
}

void check_ratio(double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio))
    throw std::invalid_argument("capacity ratio must be positive");
}

}  // namespace

GnepInstance gen_knapsack(const KnapsackGameParams& params) {
  if (params.n == 0 || params.m == 0) throw std::invalid_argument("knapsack game needs n, m > 0");
  check_ratio(params.capacity_ratio);
  Rng rng(params.seed);
  const std::size_t n = params.n, m = params.m;

  // Local layout: integer items first.
  std::vector<std::size_t> local_of(m);
  std::size_t k = 0;
  for (std::size_t j = 0; j < m; ++j)
    if (params.all_integer || j % 2 == 0) local_of[j] = k++;
  std::size_t next = k;
  for (std::size_t j = 0; j < m; ++j)
    if (!(params.all_integer || j % 2 == 0)) local_of[j] = next++;

  std::vector<ItemData> items;
  for (std::size_t i = 0; i < n; ++i) items.push_back(draw_items(rng, m, params.correlation));
  // interaction[i][kk][j]
  std::vector<std::vector<std::vector<int>>> interaction(
      n, std::vector<std::vector<int>>(n, std::vector<int>(m, 0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t kk = 0; kk < n; ++kk)
      if (kk != i)
        for (std::size_t j = 0; j < m; ++j) interaction[i][kk][j] = uniform_int(rng, -10, 10);

  GnepInstance inst;
  inst.family = "knapsack";
  for (std::size_t i = 0; i < n; ++i)
    inst.players.push_back({k, m - k, std::vector<double>(m, 0.0), std::vector<double>(m, 1.0)});
  auto var = [&](std::size_t i, std::size_t j) { return i * m + local_of[j]; };

  for (std::size_t i = 0; i < n; ++i) {
    ConstraintRow row;
    row.owner = i;
    for (std::size_t j = 0; j < m; ++j) row.terms.push_back({var(i, j), double(items[i].weight[j])});
    std::sort(row.terms.begin(), row.terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    row.rhs = capacity(items[i].weight, params.capacity_ratio);
    inst.constraints.push_back(std::move(row));

    CostFunction cost;
    for (std::size_t j = 0; j < m; ++j) cost.linear.push_back({var(i, j), -double(items[i].profit[j])});
    std::sort(cost.linear.begin(), cost.linear.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    for (std::size_t kk = 0; kk < n; ++kk) {
      if (kk == i) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (interaction[i][kk][j] != 0)
          cost.bilinear.push_back({var(i, j), var(kk, j), -double(interaction[i][kk][j])});
    }
    inst.objectives.push_back(std::move(cost));
  }
  inst.meta = {{"standard_nep", true},
               {"generator",
                {{"n", n},
                 {"m", m},
                 {"capacity_ratio", params.capacity_ratio},
                 {"correlation", std::string(to_string(params.correlation))},
                 {"all_integer", params.all_integer},
                 {"seed", params.seed}}}};
  return inst;
}

GnepInstance gen_generalized_knapsack(const GeneralizedKnapsackParams& params) {
  if (params.n == 0 || params.m == 0)
    throw std::invalid_argument("generalized knapsack game needs n, m > 0");
  check_ratio(params.capacity_ratio);
  Rng rng(params.seed);
  const std::size_t n = params.n, m = params.m;

  std::vector<ItemData> items;
  for (std::size_t i = 0; i < n; ++i) items.push_back(draw_items(rng, m, params.correlation));
  std::vector<int> avail = params.availability;
  if (avail.empty())
    for (std::size_t j = 0; j < m; ++j) avail.push_back(uniform_int(rng, 1, static_cast<int>(n)));
  if (avail.size() != m) throw std::invalid_argument("availability needs one entry per item");
  for (int c : avail)
    if (c < 1 || c > static_cast<int>(n))
      throw std::invalid_argument("item availability must lie in {1, ..., n}");

  GnepInstance inst;
  inst.family = "generalized-knapsack";
  for (std::size_t i = 0; i < n; ++i)
    inst.players.push_back({m, 0, std::vector<double>(m, 0.0), std::vector<double>(m, 1.0)});
  for (std::size_t i = 0; i < n; ++i) {
    ConstraintRow row;
    row.owner = i;
    for (std::size_t j = 0; j < m; ++j) row.terms.push_back({i * m + j, double(items[i].weight[j])});
    row.rhs = capacity(items[i].weight, params.capacity_ratio);
    inst.constraints.push_back(std::move(row));
    for (std::size_t j = 0; j < m; ++j) {
      ConstraintRow shared;
      shared.owner = i;
      for (std::size_t kk = 0; kk < n; ++kk) shared.terms.push_back({kk * m + j, 1.0});
      shared.rhs = avail[j];
      inst.constraints.push_back(std::move(shared));
    }
    CostFunction cost;
    for (std::size_t j = 0; j < m; ++j) cost.linear.push_back({i * m + j, -double(items[i].profit[j])});
    inst.objectives.push_back(std::move(cost));
  }
  inst.meta = {{"standard_nep", inst.standard_nep()},
               {"generator",
                {{"n", n},
                 {"m", m},
                 {"capacity_ratio", params.capacity_ratio},
                 {"correlation", std::string(to_string(params.correlation))},
                 {"availability", avail},
                 {"seed", params.seed}}}};
  return inst;
}

namespace {

bool reachable(const ImplementationGameParams& p, std::size_t from, std::size_t to) {
  std::vector<bool> seen(p.num_nodes, false);
  std::queue<std::size_t> q;
  q.push(from);
  seen[from] = true;
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    if (v == to) return true;
    for (const auto& a : p.arcs)
      if (a.from == v && !seen[a.to]) {
        seen[a.to] = true;
        q.push(a.to);
      }
  }
  return false;
}

std::vector<double> price_caps(const ImplementationGameParams& p) {
  if (!p.price_cap.empty()) return p.price_cap;
  double max_mu = 0.0;
  for (const auto& pl : p.players)
    for (double u : pl.utility) max_mu = std::max(max_mu, u);
  int max_c = 0;
  for (int c : p.capacity) max_c = std::max(max_c, c);
  const double cap = static_cast<double>(p.arcs.size()) * max_mu * max_c + 1.0;
  return std::vector<double>(p.arcs.size(), cap);
}

void check_graph(const ImplementationGameParams& p) {
  const std::size_t e = p.arcs.size();
  if (p.capacity.size() != e || p.target.size() != e)
    throw std::invalid_argument("capacity and target need one entry per arc");
  if (!p.price_cap.empty() && p.price_cap.size() != e)
    throw std::invalid_argument("price cap needs one entry per arc");
  for (const auto& a : p.arcs)
    if (a.from >= p.num_nodes || a.to >= p.num_nodes || a.from == a.to)
      throw InvalidGraph("arc endpoints must be distinct existing nodes");
  for (std::size_t i = 0; i < p.players.size(); ++i) {
    const auto& pl = p.players[i];
    if (pl.utility.size() != e) throw std::invalid_argument("utility needs one entry per arc");
    if (pl.demand < 0) throw std::invalid_argument("demand must be nonnegative");
    if (pl.source >= p.num_nodes || pl.sink >= p.num_nodes)
      throw InvalidGraph("player " + std::to_string(i) + " has an endpoint outside the graph");
    if (pl.demand > 0 && pl.source == pl.sink)
      throw InvalidGraph("player " + std::to_string(i) + " has coinciding endpoints");
    if (pl.demand > 0 && !reachable(p, pl.source, pl.sink))
      throw InvalidGraph("player " + std::to_string(i) + " cannot reach its sink");
  }
  for (int c : p.capacity)
    if (c < 0) throw std::invalid_argument("capacities must be nonnegative");
}

}  // namespace

GnepInstance gen_implementation_game(const ImplementationGameParams& params) {
  check_graph(params);
  const std::size_t e = params.arcs.size();
  const std::size_t n = params.players.size();
  const std::vector<double> pmax = price_caps(params);
  const std::size_t block = e + 1;
  const std::size_t price = n * block;
  auto flow = [&](std::size_t i, std::size_t a) { return i * block + a; };
  auto theta = [&](std::size_t i) { return i * block + e; };

  GnepInstance inst;
  inst.family = "implementation";
  for (std::size_t i = 0; i < n; ++i) {
    PlayerSpec spec{block, 0, std::vector<double>(block, 0.0), std::vector<double>(block, 1.0)};
    for (std::size_t a = 0; a < e; ++a)
      spec.upper[a] = std::min(params.capacity[a], params.players[i].demand);
    inst.players.push_back(std::move(spec));
  }
  inst.players.push_back({0, e, std::vector<double>(e, 0.0), pmax});

  for (std::size_t i = 0; i < n; ++i) {
    const auto& pl = params.players[i];
    for (std::size_t v = 0; v < params.num_nodes; ++v) {
      std::vector<Term> terms;
      for (std::size_t a = 0; a < e; ++a) {
        if (params.arcs[a].from == v) terms.push_back({flow(i, a), 1.0});
        if (params.arcs[a].to == v) terms.push_back({flow(i, a), -1.0});
      }
      double b = 0.0;
      if (v == pl.source) b += pl.demand;
      if (v == pl.sink) b -= pl.demand;
      if (b != 0.0) terms.push_back({theta(i), -b});
      if (terms.empty()) continue;
      std::vector<Term> neg = terms;
      for (auto& t : neg) t.coeff = -t.coeff;
      inst.constraints.push_back({i, std::move(terms), 0.0});
      inst.constraints.push_back({i, std::move(neg), 0.0});
    }
    for (std::size_t a = 0; a < e; ++a) {
      ConstraintRow row;
      row.owner = i;
      for (std::size_t j = 0; j < n; ++j) row.terms.push_back({flow(j, a), 1.0});
      row.rhs = params.capacity[a];
      inst.constraints.push_back(std::move(row));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    CostFunction cost;
    for (std::size_t a = 0; a < e; ++a) {
      if (params.players[i].utility[a] != 0.0)
        cost.linear.push_back({flow(i, a), -params.players[i].utility[a]});
      cost.bilinear.push_back({flow(i, a), price + a, 1.0});
    }
    inst.objectives.push_back(std::move(cost));
  }
  CostFunction authority;
  for (std::size_t a = 0; a < e; ++a) {
    if (params.target[a] != 0) authority.linear.push_back({price + a, double(params.target[a])});
    for (std::size_t j = 0; j < n; ++j) authority.bilinear.push_back({flow(j, a), price + a, -1.0});
  }
  inst.objectives.push_back(std::move(authority));

  nlohmann::json arcs = nlohmann::json::array();
  for (const auto& a : params.arcs) arcs.push_back({a.from, a.to});
  nlohmann::json players = nlohmann::json::array();
  for (const auto& pl : params.players)
    players.push_back({{"source", pl.source},
                       {"sink", pl.sink},
                       {"demand", pl.demand},
                       {"utility", pl.utility}});
  inst.meta = {{"standard_nep", inst.standard_nep()},
               {"graph",
                {{"num_nodes", params.num_nodes},
                 {"arcs", arcs},
                 {"players", players},
                 {"capacity", params.capacity},
                 {"target", params.target},
                 {"price_cap", pmax}}}};
  return inst;
}

ImplementationGameParams implementation_params_from_meta(const GnepInstance& instance) {
  if (!instance.meta.contains("graph"))
    throw std::invalid_argument("instance carries no graph metadata");
  const auto& g = instance.meta.at("graph");
  ImplementationGameParams p;
  p.num_nodes = g.at("num_nodes").get<std::size_t>();
  for (const auto& a : g.at("arcs")) p.arcs.push_back({a.at(0).get<std::size_t>(), a.at(1).get<std::size_t>()});
  for (const auto& pl : g.at("players"))
    p.players.push_back({pl.at("source").get<std::size_t>(), pl.at("sink").get<std::size_t>(),
                         pl.at("demand").get<int>(), pl.at("utility").get<std::vector<double>>()});
  p.capacity = g.at("capacity").get<std::vector<int>>();
  p.target = g.at("target").get<std::vector<int>>();
  p.price_cap = g.at("price_cap").get<std::vector<double>>();
  return p;
}

ImplementationGameParams random_implementation_params(const RandomGraphParams& params) {
  if (params.num_layers < 2 || params.num_nodes < params.num_layers)
    throw std::invalid_argument("need at least two layers and one node per layer");
  if (params.max_demand < 1) throw std::invalid_argument("max_demand must be positive");
  Rng rng(params.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<std::vector<std::size_t>> layers(params.num_layers);
  for (std::size_t v = 0; v < params.num_nodes; ++v)
    layers[v * params.num_layers / params.num_nodes].push_back(v);

  ImplementationGameParams p;
  p.num_nodes = params.num_nodes;
  auto has_arc = [&](std::size_t u, std::size_t v) {
    return std::any_of(p.arcs.begin(), p.arcs.end(),
                       [&](const Arc& a) { return a.from == u && a.to == v; });
  };
  for (std::size_t l = 0; l + 1 < layers.size(); ++l)
    for (std::size_t u : layers[l])
      for (std::size_t v : layers[l + 1])
        if (coin(rng) < params.density) p.arcs.push_back({u, v});
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    for (std::size_t u : layers[l]) {
      if (std::any_of(p.arcs.begin(), p.arcs.end(), [&](const Arc& a) { return a.from == u; }))
        continue;
      const auto& nxt = layers[l + 1];
      p.arcs.push_back({u, nxt[static_cast<std::size_t>(uniform_int(rng, 0, int(nxt.size()) - 1))]});
    }
    for (std::size_t v : layers[l + 1]) {
      if (std::any_of(p.arcs.begin(), p.arcs.end(), [&](const Arc& a) { return a.to == v; }))
        continue;
      const auto& prv = layers[l];
      const std::size_t u = prv[static_cast<std::size_t>(uniform_int(rng, 0, int(prv.size()) - 1))];
      if (!has_arc(u, v)) p.arcs.push_back({u, v});
    }
  }
  std::sort(p.arcs.begin(), p.arcs.end(), [](const Arc& a, const Arc& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });

  for (std::size_t a = 0; a < p.arcs.size(); ++a) {
    p.capacity.push_back(uniform_int(rng, 1, params.max_demand));
    p.target.push_back(uniform_int(rng, 1, params.max_demand));
  }
  const auto& first = layers.front();
  const auto& last = layers.back();
  for (std::size_t i = 0; i < params.num_players; ++i) {
    FlowPlayer pl;
    pl.source = first[static_cast<std::size_t>(uniform_int(rng, 0, int(first.size()) - 1))];
    std::vector<std::size_t> sinks;
    for (std::size_t t : last)
      if (reachable(p, pl.source, t)) sinks.push_back(t);
    pl.sink = sinks[static_cast<std::size_t>(uniform_int(rng, 0, int(sinks.size()) - 1))];
    pl.demand = uniform_int(rng, 1, params.max_demand);
    for (std::size_t a = 0; a < p.arcs.size(); ++a)
      pl.utility.push_back(uniform_int(rng, 0, static_cast<int>(params.max_utility)));
    p.players.push_back(std::move(pl));
  }
  return p;
}

GnepInstance appendix_b_fixture() {
  GnepInstance inst;
  inst.family = "knapsack";
  // x11 (integer), x12, x21 (integer), x22
  inst.players.push_back({1, 1, {0.0, 0.0}, {1.0, 1.0}});
  inst.players.push_back({1, 1, {0.0, 0.0}, {1.0, 1.0}});
  inst.constraints.push_back({0, {{0, 1.0}, {1, 1.0}}, 1.0});
  inst.constraints.push_back({1, {{2, 9.0}, {3, 8.0}}, 13.0});
  inst.objectives.push_back({0.0, {{0, -2.0}, {1, -2.0}}, {{0, 2, -1.0}, {1, 3, -1.0}}});
  inst.objectives.push_back({0.0, {{2, -10.0}, {3, -9.0}}, {{2, 0, -1.0}, {3, 1, -4.0}}});
  inst.meta = {{"standard_nep", true}};
  return inst;
}

GnepInstance ic_example_fixture() {
  GnepInstance inst;
  inst.family = "ic-example";
  for (int i = 0; i < 3; ++i) inst.players.push_back({2, 0, {0.0, 0.0}, {1.0, 1.0}});
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t a = 2 * i, b = 2 * i + 1;
    inst.constraints.push_back({i, {{a, 1.0}, {b, 1.0}}, 1.0});
    inst.constraints.push_back({i, {{a, -1.0}, {b, -1.0}}, -1.0});
    inst.constraints.push_back({i, {{0, 1.0}, {2, 1.0}, {4, 1.0}}, 2.0});
  }
  inst.objectives.push_back({1.0, {{0, -1.0}}, {}});
  inst.objectives.push_back({1.0, {{3, -1.0}, {0, 1.0}}, {}});
  inst.objectives.push_back({1.0, {{5, -1.0}, {0, 1.0}}, {}});
  inst.meta = {{"standard_nep", false}, {"eta_upper", {2.0, 2.0, 2.0}}};
  return inst;
}

}  // namespace gnep
