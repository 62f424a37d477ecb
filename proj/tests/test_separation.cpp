#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "ioscm/error.hpp"
#include "ioscm/graph_ops.hpp"
#include "ioscm/separation.hpp"

using namespace ioscm;

TEST(Sigma, ConditioningSetContainingA) {
  const Dmg g = fixtures::chain();
  EXPECT_TRUE(sigma_separated(g, {"a"}, {"c"}, {"a"}));
  EXPECT_TRUE(sigma_separated(g, {"a", "b"}, {"c"}, {"a", "b"}));
}

TEST(Sigma, RightChainInsideComponentStaysOpen) {
  const Dmg g = fixtures::chain_into_cycle();
  EXPECT_FALSE(sigma_separated(g, {"x"}, {"z"}, {"y"}));
}

TEST(Sigma, RunningExampleIndicatorCondition) {
  const Dmg g = extend(fixtures::running_example());
  EXPECT_TRUE(sigma_separated(g, {"Z0", "L1", "L2"}, {"I_X"}, {"C"}));
}

TEST(D, CycleBlockedByConditioning) {
  const Dmg g = DmgBuilder().output("a").output("b").output("c").output("d").path({"a", "b", "c", "d", "a"}).build();
  EXPECT_TRUE(d_separated(g, {"a"}, {"c"}, {"b", "d"}));
  EXPECT_FALSE(sigma_separated(g, {"a"}, {"c"}, {"b", "d"}));
  EXPECT_FALSE(d_separated(fixtures::chain_into_cycle(), {"x"}, {"z"}, {"y"}));
}

TEST(D, ChainAndCollider) {
  EXPECT_TRUE(d_separated(fixtures::chain(), {"a"}, {"c"}, {"b"}));
  EXPECT_FALSE(d_separated(fixtures::chain(), {"a"}, {"c"}, {}));
  EXPECT_FALSE(d_separated(fixtures::collider(), {"a"}, {"c"}, {"b"}));
  EXPECT_TRUE(d_separated(fixtures::collider(), {"a"}, {"c"}, {}));
}

TEST(D, ColliderOpenedByDescendant) {
  const Dmg g = DmgBuilder().output("a").output("b").output("c").output("d").edge("a", "b").edge("c", "b").edge("b", "d").build();
  EXPECT_FALSE(d_separated(g, {"a"}, {"c"}, {"d"}));
}

TEST(Separation, InterventionField) {
  const Dmg g = fixtures::backdoor();
  SeparationQuery q{{"X"}, {"Y"}, {}, Notion::Sigma, {}};
  EXPECT_FALSE(separated(g, q));
  q.intervention = {"X", "Y"};
  EXPECT_TRUE(separated(g, SeparationQuery{{"Z"}, {"Y"}, {}, Notion::Sigma, {"Y"}}));
}

TEST(Separation, LatentsRejectedInQueries) {
  const Dmg g = DmgBuilder().output("a").output("b").latent("u").edge("u", "a").edge("u", "b").build();
  EXPECT_FALSE(sigma_separated(g, {"a"}, {"b"}, {}));
  try {
    sigma_separated(g, {"u"}, {"b"}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LatentInQuery);
  }
}

TEST(Separation, UnknownNode) {
  try {
    sigma_separated(fixtures::chain(), {"q"}, {"a"}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownNode);
  }
}

TEST(Oracle, AgreesOnSmallCyclicGraph) {
  const Dmg g = fixtures::chain_into_cycle();
  const std::vector<NodeId> nodes{"x", "y", "z"};
  for (const auto& a : nodes)
    for (const auto& b : nodes)
      for (int mask = 0; mask < 8; ++mask) {
        NodeSet c;
        for (int i = 0; i < 3; ++i)
          if (mask >> i & 1) c.insert(nodes[static_cast<std::size_t>(i)]);
        for (Notion n : {Notion::Sigma, Notion::D}) {
          SeparationQuery q{{a}, {b}, c, n, {}};
          EXPECT_EQ(oracle_separated(g, q).separated, separated(g, q)) << a << " " << b << " | " << join(c);
        }
      }
}

TEST(Oracle, TrivialWalk) {
  const Dmg g = DmgBuilder().output("v").build();
  const auto r = oracle_separated(g, SeparationQuery{{"v"}, {"v"}, {}, Notion::Sigma, {}});
  EXPECT_FALSE(r.separated);
  EXPECT_EQ(r.witness, std::vector<NodeId>{"v"});
  EXPECT_FALSE(sigma_separated(g, {"v"}, {"v"}, {}));
}

TEST(Oracle, IsolatedNodes) {
  const Dmg g = DmgBuilder().output("a").output("b").build();
  EXPECT_TRUE(oracle_separated(g, SeparationQuery{{"a"}, {"b"}, {}, Notion::Sigma, {}}).separated);
}

TEST(Oracle, WitnessIsAWalkOfTheGraph) {
  const Dmg g = fixtures::front_door();
  const auto r = oracle_separated(g, SeparationQuery{{"X"}, {"Y"}, {"Z"}, Notion::Sigma, {}});
  ASSERT_FALSE(r.separated);
  ASSERT_GE(r.witness.size(), 2u);
  EXPECT_EQ(r.witness.front(), "X");
  EXPECT_EQ(r.witness.back(), "Y");
  for (std::size_t i = 0; i + 1 < r.witness.size(); ++i) {
    const auto& u = r.witness[i];
    const auto& v = r.witness[i + 1];
    EXPECT_TRUE(g.has_directed(u, v) || g.has_directed(v, u) || g.has_bidirected(u, v));
  }
}

TEST(Oracle, SizeGuard) {
  gen::Rng rng(3);
  const Dmg g = gen::random_dmg(rng, {10, 10});
  try {
    oracle_separated(g, SeparationQuery{{"v0"}, {"v1"}, {}, Notion::Sigma, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GraphTooLarge);
  }
}

TEST(Separator, SigmaImpliesD) {
  gen::Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const Dmg g = gen::random_dmg(rng, {});
    const Separator sep(g);
    const auto ids = g.ids();
    for (const auto& a : ids)
      for (const auto& b : ids)
        if (a != b && sep.separated({a}, {b}, {}, Notion::Sigma)) {
          EXPECT_TRUE(sep.separated({a}, {b}, {}, Notion::D));
        }
  }
}
