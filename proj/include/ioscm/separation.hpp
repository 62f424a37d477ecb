#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "ioscm/dmg.hpp"
#include "ioscm/graph_ops.hpp"

namespace ioscm {

enum class Notion { Sigma, D };

std::string_view to_string(Notion notion);
Notion parse_notion(std::string_view text);

struct SeparationQuery {
  NodeSet a;
  NodeSet b;
  NodeSet c;
  Notion notion = Notion::Sigma;
  // When nonempty the query is answered on intervene(g, intervention).
  NodeSet intervention;
};

/// Reusable separation decider for one graph.
///
/// Decides separation by reachability over (node, arrival mark) states, so a
/// query costs O(|V| + |E|). Empty A or B is vacuously separated; a node in
/// A ∩ B outside C is a connecting walk on its own. Self-loops are ignored.
/// Latent nodes may be present in the graph but not in query sets.
class Separator {
 public:
  explicit Separator(const Dmg& g);

  bool separated(const NodeSet& a, const NodeSet& b, const NodeSet& c, Notion notion = Notion::Sigma) const;
  bool separated(const std::vector<bool>& a, const std::vector<bool>& b, const std::vector<bool>& c,
                 Notion notion) const;

  const Dmg& graph() const { return g_; }
  const SccPartition& scc() const { return scc_; }

 private:
  std::vector<bool> checked_mask(const NodeSet& s) const;

  Dmg g_;
  SccPartition scc_;
};

bool separated(const Dmg& g, const SeparationQuery& q);
bool sigma_separated(const Dmg& g, const NodeSet& a, const NodeSet& b, const NodeSet& c);
bool d_separated(const Dmg& g, const NodeSet& a, const NodeSet& b, const NodeSet& c);

struct OracleResult {
  bool separated = true;
  // A connecting walk from A to B when not separated.
  std::vector<NodeId> witness;
};

/// Independent check that searches walks edge by edge and classifies every
/// triple literally (collider, left chain, right chain, fork). Strongly
/// connected components come from a transitive-closure matrix rather than
/// from Tarjan's algorithm. Throws GraphTooLarge above `max_nodes`.
OracleResult oracle_separated(const Dmg& g, const SeparationQuery& q, std::size_t max_nodes = 8);

}  // namespace ioscm
