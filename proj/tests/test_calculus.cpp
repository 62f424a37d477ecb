#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ioscm/calculus.hpp"
#include "ioscm/error.hpp"
#include "ioscm/graph_ops.hpp"

using namespace ioscm;

TEST(Rule2, BackdoorGraph) {
  const RuleVerdict v = check_rule(fixtures::backdoor(), {Rule::Two, {"X"}, {"Y"}, {"Z"}, {}, false});
  EXPECT_TRUE(v.applicable);
  EXPECT_EQ(v.conclusion, "P(Y|do(X),Z) = P(Y|X,Z)");
  EXPECT_EQ(v.separation_checked.b, NodeSet{"I_X"});
  EXPECT_EQ(v.separation_checked.c, (NodeSet{"X", "Z"}));
  EXPECT_TRUE(v.graph_used.contains("I_Z"));
}

TEST(Rule2, BowGraph) {
  const RuleVerdict v = check_rule(fixtures::bow(), {Rule::Two, {"X"}, {"Y"}, {}, {}, false});
  EXPECT_FALSE(v.applicable);
  EXPECT_TRUE(v.conclusion.empty());
}

TEST(Rule1, EmptyXIsTrivial) {
  const RuleVerdict v = check_rule(fixtures::bow(), {Rule::One, {}, {"Y"}, {}, {}, false});
  EXPECT_TRUE(v.applicable);
  EXPECT_EQ(v.conclusion, "P(Y) = P(Y)");
}

TEST(Rule1, ChainObservation) {
  EXPECT_TRUE(check_rule(fixtures::chain(), {Rule::One, {"a"}, {"c"}, {"b"}, {}, false}).applicable);
  EXPECT_FALSE(check_rule(fixtures::chain(), {Rule::One, {"a"}, {"c"}, {}, {}, false}).applicable);
}

TEST(Rule3, UnrelatedAction) {
  const Dmg g = DmgBuilder().output("X").output("Y").output("Z").edge("Z", "Y").build();
  const RuleVerdict v = check_rule(g, {Rule::Three, {"X"}, {"Y"}, {"Z"}, {}, false});
  EXPECT_TRUE(v.applicable);
  EXPECT_EQ(v.conclusion, "P(Y|do(X),Z) = P(Y|Z)");
  EXPECT_FALSE(check_rule(fixtures::chain(), {Rule::Three, {"a"}, {"c"}, {}, {}, false}).applicable);
}

TEST(Rules, HeldFixedInterventionsAndInputs) {
  const Dmg g = DmgBuilder().input("J").output("X").output("Y").output("W").edge("J", "X").edge("X", "Y").edge("W", "Y").build();
  const RuleVerdict v = check_rule(g, {Rule::Two, {"X"}, {"Y"}, {}, {"W"}, false});
  EXPECT_TRUE(v.applicable);
  EXPECT_EQ(v.conclusion, "P(Y|do(X),do(J,W)) = P(Y|X,do(J,W))");
  EXPECT_EQ(v.graph_used.kind("W"), NodeKind::Input);
}

TEST(Rules, ConditionOnInputsOption) {
  const Dmg g = DmgBuilder().output("X").output("Y").output("W").edge("W", "X").edge("W", "Y").build();
  const RuleVerdict v = check_rule(g, {Rule::Two, {"X"}, {"Y"}, {}, {"W"}, true});
  EXPECT_EQ(v.separation_checked.c, (NodeSet{"W", "X"}));
}

TEST(Rules, RejectsOverlappingRoles) {
  try {
    check_rule(fixtures::chain(), {Rule::One, {"a"}, {"a"}, {}, {}, false});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedQuery);
  }
}

TEST(Rules, CyclicGraphUsesSigma) {
  // x → y ⇄ z: observing y does not screen x off from z, so rule 1 fails.
  EXPECT_FALSE(check_rule(fixtures::chain_into_cycle(), {Rule::One, {"x"}, {"z"}, {"y"}, {}, false}).applicable);
}

TEST(MechanismChange, Examples) {
  const Dmg g = DmgBuilder().input("j").output("v").output("w").edge("j", "v").edge("v", "w").build();
  EXPECT_TRUE(check_mechanism_change(g, {"w"}, {}, {}));
  EXPECT_FALSE(check_mechanism_change(g, {"w"}, {}, {"j"}));
  EXPECT_TRUE(check_mechanism_change(g, {"w"}, {"v"}, {"j"}));
  const Dmg iso = DmgBuilder().input("j").output("v").output("w").edge("j", "v").build();
  EXPECT_TRUE(check_mechanism_change(iso, {"w"}, {}, {"j"}));
}

TEST(Ignorability, Examples) {
  EXPECT_TRUE(check_ignorability(fixtures::backdoor(), {"Y"}, {"X"}, {"Z"}, false));
  EXPECT_FALSE(check_ignorability(fixtures::bow(), {"Y"}, {"X"}, {}, false));
  EXPECT_TRUE(check_ignorability(fixtures::bow(), {"Y"}, {}, {}, false));
}
