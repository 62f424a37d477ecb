#pragma once

#include <cstddef>
#include <vector>

#include "ioscm/dmg.hpp"

namespace ioscm {

/// Strongly connected components of the directed part of a graph.
///
/// Components are numbered in a topological order of the condensation;
/// among components that are simultaneously available the one with the
/// lexicographically smallest member comes first. Members are sorted.
struct SccPartition {
  std::vector<std::size_t> component;             // node index -> component
  std::vector<std::vector<std::size_t>> members;  // component -> node indices

  std::size_t count() const { return members.size(); }
  bool same(std::size_t a, std::size_t b) const { return component[a] == component[b]; }
  bool trivial(std::size_t c) const { return members[c].size() == 1; }
  NodeSet component_of(const Dmg& g, const NodeId& v) const;
  std::vector<NodeSet> components(const Dmg& g) const;
};

SccPartition strongly_connected_components(const Dmg& g);

// All loops inside `within`, which must lie in a single SCC. Ordered by size,
// then lexicographically.
std::vector<NodeSet> enumerate_loops(const Dmg& g, const NodeSet& within);

NodeSet ancestors(const Dmg& g, const NodeSet& s);
NodeSet descendants(const Dmg& g, const NodeSet& s);
NodeSet parents(const Dmg& g, const NodeSet& s);
NodeSet children(const Dmg& g, const NodeSet& s);

// Index-level closures; `allowed` restricts which nodes may be traversed
// (seeds are always included).
std::vector<bool> ancestor_mask(const Dmg& g, const std::vector<bool>& seeds,
                                const std::vector<bool>* allowed = nullptr);
std::vector<bool> descendant_mask(const Dmg& g, const std::vector<bool>& seeds,
                                  const std::vector<bool>* allowed = nullptr);

bool is_acyclic(const Dmg& g);

// Subgraph on `keep` with every edge between kept nodes. Latent nodes left
// without children are dropped.
Dmg induced_subgraph(const Dmg& g, const NodeSet& keep);

// Latent projection onto the complement of `w`.
Dmg marginalize(const Dmg& g, const NodeSet& w);

// Projects away every latent node.
Dmg induced_dmg(const Dmg& gplus);

// Perfect intervention: edges into `w` and bidirected edges at `w` are removed
// and `w` becomes input nodes.
Dmg intervene(const Dmg& g, const NodeSet& w);

// Name of the indicator input attached to output `v` by `extend`.
NodeId indicator_name(const NodeId& v);
Dmg extend(const Dmg& g);

Dmg acyclify(const Dmg& g);

// Primed copy name used for the interventional branch of a twin graph.
NodeId twin_name(const NodeId& v);
Dmg twin_graph(const Dmg& g, const NodeSet& w);

// Input nodes become mutually confounded. Since bidirected edges only join
// output nodes, inputs are re-kinded as parentless outputs when there are at
// least two of them.
Dmg input_confound(const Dmg& g);

}  // namespace ioscm
