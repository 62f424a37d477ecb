#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ioscm {

using NodeId = std::string;
using NodeSet = std::set<NodeId>;

enum class NodeKind { Output, Input, Latent };

std::string_view to_string(NodeKind kind);
NodeKind parse_node_kind(std::string_view text);

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

/// Directed mixed graph over output, input and latent nodes.
///
/// Values are immutable once built. Nodes are kept in lexicographic order of
/// their ids, so node indices are stable and deterministic. Construction
/// enforces the structural invariants of an i/o causal graph: input and latent
/// nodes have no parents, bidirected edges join two distinct output nodes,
/// and every latent node has at least one child.
class Dmg {
 public:
  Dmg() = default;
  Dmg(std::vector<std::pair<NodeId, NodeKind>> nodes, EdgeList directed, EdgeList bidirected);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  const std::vector<NodeId>& ids() const { return ids_; }
  const NodeId& id(std::size_t i) const { return ids_[i]; }
  NodeKind kind(std::size_t i) const { return kinds_[i]; }
  NodeKind kind(const NodeId& v) const { return kinds_[index(v)]; }

  bool contains(const NodeId& v) const { return find(v).has_value(); }
  std::optional<std::size_t> find(const NodeId& v) const;
  // Throws Error(UnknownNode).
  std::size_t index(const NodeId& v) const;
  std::vector<std::size_t> indices(const NodeSet& s) const;
  std::vector<bool> mask(const NodeSet& s) const;
  NodeSet names(const std::vector<bool>& mask) const;
  NodeSet names(const std::vector<std::size_t>& idx) const;

  // Adjacency by index; each list is sorted and free of duplicates.
  const std::vector<std::size_t>& children(std::size_t i) const { return children_[i]; }
  const std::vector<std::size_t>& parents(std::size_t i) const { return parents_[i]; }
  const std::vector<std::size_t>& siblings(std::size_t i) const { return siblings_[i]; }

  bool has_directed(const NodeId& from, const NodeId& to) const;
  bool has_bidirected(const NodeId& a, const NodeId& b) const;

  // Sorted lexicographically; bidirected pairs are reported with first < second.
  EdgeList directed_edges() const;
  EdgeList bidirected_edges() const;
  std::size_t directed_count() const;
  std::size_t bidirected_count() const;

  NodeSet nodes() const;
  NodeSet nodes_of_kind(NodeKind kind) const;
  NodeSet outputs() const { return nodes_of_kind(NodeKind::Output); }
  NodeSet inputs() const { return nodes_of_kind(NodeKind::Input); }
  NodeSet latents() const { return nodes_of_kind(NodeKind::Latent); }
  bool has_latents() const;

  std::vector<std::pair<NodeId, NodeKind>> node_list() const;

  bool operator==(const Dmg& other) const;

 private:
  std::vector<NodeId> ids_;
  std::vector<NodeKind> kinds_;
  std::map<NodeId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> siblings_;
};

/// Incremental construction helper; `build()` validates.
class DmgBuilder {
 public:
  DmgBuilder& node(NodeId id, NodeKind kind);
  DmgBuilder& output(NodeId id) { return node(std::move(id), NodeKind::Output); }
  DmgBuilder& input(NodeId id) { return node(std::move(id), NodeKind::Input); }
  DmgBuilder& latent(NodeId id) { return node(std::move(id), NodeKind::Latent); }
  DmgBuilder& edge(NodeId from, NodeId to);
  DmgBuilder& bi(NodeId a, NodeId b);
  // Chain convenience: edges a->b->c->...
  DmgBuilder& path(std::initializer_list<NodeId> nodes);

  Dmg build() const;

 private:
  std::vector<std::pair<NodeId, NodeKind>> nodes_;
  EdgeList directed_;
  EdgeList bidirected_;
};

std::string join(const NodeSet& s, std::string_view sep = ",");

}  // namespace ioscm
