#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ioscm/error.hpp"
#include "ioscm/graph_json.hpp"
#include "ioscm/graph_ops.hpp"

using namespace ioscm;
using nlohmann::json;

TEST(GraphJson, RoundTrip) {
  for (const Dmg& g : {fixtures::running_example(), extend(fixtures::front_door()),
                       DmgBuilder().output("a").latent("u").input("j").edge("u", "a").edge("j", "a").build()}) {
    EXPECT_EQ(graph_from_json(graph_to_json(g)), g);
    EXPECT_EQ(graph_from_json(json::parse(graph_to_json(g).dump())), g);
  }
}

TEST(GraphJson, CanonicalOrder) {
  const json j = json::parse(R"({"nodes":[{"id":"b","kind":"output"},{"id":"a","kind":"output"}],
                                "directed":[["b","a"]],"bidirected":[["b","a"]]})");
  const Dmg g = graph_from_json(j);
  EXPECT_EQ(graph_to_json(g).dump(),
            R"({"bidirected":[["a","b"]],"directed":[["b","a"]],"nodes":[{"id":"a","kind":"output"},{"id":"b","kind":"output"}]})");
}

TEST(GraphJson, MalformedInputNamesField) {
  try {
    graph_from_json(json::parse(R"({"nodes":[{"id":"a","kind":"widget"}]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidGraph);
    EXPECT_FALSE(e.field().empty());
  }
  try {
    graph_from_json(json::parse(R"({"nodes":[{"id":"a","kind":"output"}],"directed":[["a"]]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidGraph);
    EXPECT_EQ(e.field(), "directed");
  }
}

TEST(GraphJson, HashIsStableAndDistinguishes) {
  EXPECT_EQ(graph_hash(fixtures::chain()), graph_hash(fixtures::chain()));
  EXPECT_NE(graph_hash(fixtures::chain()), graph_hash(fixtures::collider()));
  EXPECT_EQ(graph_hash(fixtures::chain()).size(), 16u);
}
