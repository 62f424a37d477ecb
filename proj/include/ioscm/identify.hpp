#pragma once

#include <vector>

#include "ioscm/dmg.hpp"
#include "ioscm/estimand.hpp"

namespace ioscm {

// Closure of b under bidirected adjacency and shared strongly connected
// components, restricted to output nodes.
NodeSet consolidated_district(const Dmg& g, const NodeSet& b);
// Partition of the output nodes into consolidated districts, each sorted,
// listed by smallest member.
std::vector<NodeSet> consolidated_districts(const Dmg& g);

// Topological order of the SCC condensation with lexicographic tie-breaks;
// members of each SCC are contiguous and sorted.
std::vector<NodeId> apt_order(const Dmg& g);

// The graph of the sub-model on c: c with its parents, where parents outside
// c become inputs without incoming or bidirected edges.
Dmg subgraph_for(const Dmg& g, const NodeSet& c);

struct IdQuery {
  NodeSet y;
  // Interventions; input nodes of the graph are always included.
  NodeSet w;
};

struct IdResult {
  bool identifiable = false;
  EstimandPtr estimand;
};

IdResult identify(const Dmg& g, const IdQuery& q);

}  // namespace ioscm
