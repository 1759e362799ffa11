#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "gnep/errors.hpp"
#include "gnep/instances.hpp"
#include "support/oracles.hpp"

namespace gnep {
namespace {

TEST(Knapsack, SeedDeterminesTheInstance) {
  const KnapsackGameParams p{3, 6, 0.5, Correlation::Weak, true, 42};
  EXPECT_EQ(gen_knapsack(p), gen_knapsack(p));
  auto q = p;
  q.seed = 43;
  EXPECT_NE(gen_knapsack(p), gen_knapsack(q));
}

TEST(Knapsack, DataRanges) {
  for (auto corr : {Correlation::Uncorrelated, Correlation::Weak, Correlation::Strong}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto inst = gen_knapsack({2, 10, 0.2, corr, true, seed});
      ASSERT_NO_THROW(inst.validate());
      EXPECT_TRUE(inst.standard_nep());
      EXPECT_TRUE(inst.all_binary());
      for (std::size_t i = 0; i < 2; ++i) {
        const auto& row = inst.constraints[i];
        double total = 0.0;
        std::vector<double> w(10);
        for (const auto& t : row.terms) {
          EXPECT_GE(t.coeff, 1.0);
          EXPECT_LE(t.coeff, 100.0);
          w[t.var - inst.offset(i)] = t.coeff;
          total += t.coeff;
        }
        EXPECT_EQ(row.rhs, std::round(0.2 * total));
        for (const auto& t : inst.objectives[i].linear) {
          const double profit = -t.coeff, weight = w[t.var - inst.offset(i)];
          EXPECT_GE(profit, 1.0);
          if (corr == Correlation::Strong) EXPECT_EQ(profit, weight + 10);
          if (corr == Correlation::Weak) EXPECT_LE(std::abs(profit - weight), 10.0);
          if (corr == Correlation::Uncorrelated) EXPECT_LE(profit, 100.0);
        }
        for (const auto& b : inst.objectives[i].bilinear) {
          EXPECT_LE(std::abs(b.coeff), 10.0);
          EXPECT_NE(b.coeff, 0.0);
          EXPECT_EQ(inst.owner_of(b.a), i);
          EXPECT_NE(inst.owner_of(b.b), i);
        }
      }
    }
  }
}

TEST(Knapsack, MixedIntegerLayout) {
  const auto inst = gen_knapsack({2, 5, 0.5, Correlation::Uncorrelated, false, 1});
  for (const auto& p : inst.players) {
    EXPECT_EQ(p.k, 3u);
    EXPECT_EQ(p.l, 2u);
  }
  EXPECT_FALSE(inst.all_binary());
  EXPECT_EQ(inst.meta.at("generator").at("all_integer"), false);
}

TEST(GeneralizedKnapsack, SharedAvailabilityRows) {
  const auto inst = gen_generalized_knapsack({3, 4, 0.5, Correlation::Strong, 9, {1, 2, 3, 1}});
  ASSERT_NO_THROW(inst.validate());
  EXPECT_FALSE(inst.standard_nep());
  EXPECT_EQ(inst.constraints.size(), 3u * (1 + 4));
  const auto& row = inst.constraints[2];  // player 0, item 1
  EXPECT_EQ(row.rhs, 2.0);
  EXPECT_EQ(row.terms.size(), 3u);
  EXPECT_THROW(gen_generalized_knapsack({2, 2, 0.5, Correlation::Weak, 0, {3, 1}}),
               std::invalid_argument);
}

TEST(Enumeration, MatchesDefinition) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = seed % 2 ? gen_knapsack({2, 4, 0.5, Correlation::Weak, true, seed})
                               : gen_generalized_knapsack({2, 4, 0.5, Correlation::Weak, seed, {}});
    auto fast = enumerate_equilibria(inst);
    auto slow = oracle::equilibria(inst);
    std::sort(fast.begin(), fast.end());
    std::sort(slow.begin(), slow.end());
    EXPECT_EQ(fast, slow) << "seed " << seed;
  }
}

TEST(Enumeration, Limits) {
  const auto big = gen_knapsack({3, 8, 0.5, Correlation::Weak, true, 0});
  EXPECT_THROW(enumerate_equilibria(big, 1000), TooLarge);
  EXPECT_THROW(enumerate_equilibria(appendix_b_fixture()), std::invalid_argument);
}

ImplementationGameParams diamond() {
  ImplementationGameParams p;
  p.num_nodes = 4;
  p.arcs = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  p.capacity = {1, 1, 1, 1};
  p.target = {1, 0, 1, 0};
  p.players = {{0, 3, 1, {3, 0, 3, 0}}};
  return p;
}

TEST(Implementation, GameLayout) {
  const auto inst = gen_implementation_game(diamond());
  ASSERT_NO_THROW(inst.validate());
  EXPECT_EQ(inst.num_players(), 2u);
  EXPECT_EQ(inst.players[0].size(), 5u);
  EXPECT_EQ(inst.players[1].k, 0u);
  EXPECT_EQ(inst.players[1].l, 4u);
  EXPECT_EQ(inst.upper(inst.offset(1)), 4.0 * 3.0 * 1.0 + 1.0);
  const auto back = implementation_params_from_meta(inst);
  EXPECT_EQ(back.arcs.size(), 4u);
  EXPECT_EQ(back.target, diamond().target);
}

TEST(Implementation, Flows) {
  const auto flows = enumerate_flows(diamond(), 0);
  EXPECT_EQ(flows.size(), 3u);  // two paths and the zero flow
  EXPECT_NE(std::find(flows.begin(), flows.end(), std::vector<int>{0, 0, 0, 0}), flows.end());
  auto cyclic = diamond();
  cyclic.arcs.push_back({3, 0});
  cyclic.capacity.push_back(1);
  cyclic.target.push_back(0);
  cyclic.players[0].utility.push_back(0);
  EXPECT_THROW(enumerate_flows(cyclic, 0), InvalidGraph);
}

TEST(Implementation, OracleWitnessPassesTheAudit) {
  const auto p = diamond();
  const auto res = implementation_oracle(p);
  ASSERT_TRUE(res.has_equilibrium);
  EXPECT_TRUE(audit_implementation(p, res.witness).ok());
  const auto inst = gen_implementation_game(p);
  EXPECT_LE(eval_vhat(inst, res.witness), 1e-6);
}

TEST(Implementation, InvalidGraphs) {
  auto p = diamond();
  p.arcs[0] = {0, 0};
  EXPECT_THROW(gen_implementation_game(p), InvalidGraph);
  auto q = diamond();
  q.players[0].sink = 0;
  q.players[0].source = 3;
  EXPECT_THROW(gen_implementation_game(q), InvalidGraph);
}

TEST(Implementation, RandomGraphsAreValid) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomGraphParams g;
    g.seed = seed;
    const auto p = random_implementation_params(g);
    EXPECT_EQ(p.num_nodes, 10u);
    EXPECT_NO_THROW(gen_implementation_game(p).validate());
  }
}

TEST(InstanceIo, RoundTrip) {
  for (const auto& inst :
       {appendix_b_fixture(), ic_example_fixture(), gen_knapsack({2, 5, 0.8, Correlation::Strong, false, 2}),
        gen_implementation_game(diamond())}) {
    const auto text = serialize_instance(inst);
    EXPECT_EQ(parse_instance(text), inst);
  }
  const auto path = std::filesystem::temp_directory_path() / "gnep_roundtrip.json";
  save_instance(appendix_b_fixture(), path);
  EXPECT_EQ(load_instance(path), appendix_b_fixture());
  std::filesystem::remove(path);
}

TEST(InstanceIo, ErrorsNameFieldAndLine) {
  auto text = serialize_instance(appendix_b_fixture());
  const auto pos = text.find("\"ub\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 4, "\"uu\"");
  try {
    parse_instance(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(e.field().find("players[0]"), std::string::npos) << e.what();
    EXPECT_GT(e.line(), 1u);
  }
  EXPECT_THROW(parse_instance("{ not json"), ParseError);
  EXPECT_THROW(load_instance("/nonexistent/instance.json"), ParseError);
}

}  // namespace
}  // namespace gnep
