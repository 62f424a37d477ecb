#include "ioscm/dmg.hpp"

#include <algorithm>

#include "ioscm/error.hpp"

namespace ioscm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::SccBoundViolation: return "SccBoundViolation";
    case ErrorCode::InputMarginalization: return "InputMarginalization";
    case ErrorCode::NameCollision: return "NameCollision";
    case ErrorCode::LatentInQuery: return "LatentInQuery";
    case ErrorCode::GraphTooLarge: return "GraphTooLarge";
    case ErrorCode::MalformedQuery: return "MalformedQuery";
    case ErrorCode::MalformedSpec: return "MalformedSpec";
    case ErrorCode::CaseMismatch: return "CaseMismatch";
    case ErrorCode::PoolTooLarge: return "PoolTooLarge";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::DomainGap: return "DomainGap";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::SingularConditioning: return "SingularConditioning";
    case ErrorCode::MissingSubLoopMechanism: return "MissingSubLoopMechanism";
    case ErrorCode::NotUniquelySolvable: return "NotUniquelySolvable";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::InvalidModel: return "InvalidModel";
  }
  return "Unknown";
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Output: return "output";
    case NodeKind::Input: return "input";
    case NodeKind::Latent: return "latent";
  }
  return "output";
}

NodeKind parse_node_kind(std::string_view text) {
  if (text == "output") return NodeKind::Output;
  if (text == "input") return NodeKind::Input;
  if (text == "latent") return NodeKind::Latent;
  throw Error(ErrorCode::InvalidGraph, "unknown node kind '" + std::string(text) + "'", "kind");
}

namespace {

void sort_unique(std::vector<std::size_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Dmg::Dmg(std::vector<std::pair<NodeId, NodeKind>> nodes, EdgeList directed, EdgeList bidirected) {
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].first.empty()) throw Error(ErrorCode::InvalidGraph, "node ids must be nonempty", "nodes");
    if (i > 0 && nodes[i].first == nodes[i - 1].first)
      throw Error(ErrorCode::InvalidGraph, "duplicate node id '" + nodes[i].first + "'", nodes[i].first);
    index_.emplace(nodes[i].first, i);
    ids_.push_back(nodes[i].first);
    kinds_.push_back(nodes[i].second);
  }
  const std::size_t n = ids_.size();
  children_.assign(n, {});
  parents_.assign(n, {});
  siblings_.assign(n, {});

  for (const auto& [from, to] : directed) {
    const std::size_t a = index(from);
    const std::size_t b = index(to);
    if (kinds_[b] != NodeKind::Output)
      throw Error(ErrorCode::InvalidGraph,
                  "directed edge " + from + "->" + to + " points into a " + std::string(to_string(kinds_[b])) +
                      " node",
                  to);
    children_[a].push_back(b);
    parents_[b].push_back(a);
  }
  for (const auto& [x, y] : bidirected) {
    const std::size_t a = index(x);
    const std::size_t b = index(y);
    if (a == b) throw Error(ErrorCode::InvalidGraph, "bidirected self-loop at " + x, x);
    if (kinds_[a] != NodeKind::Output || kinds_[b] != NodeKind::Output)
      throw Error(ErrorCode::InvalidGraph, "bidirected edge " + x + "<->" + y + " must join output nodes",
                  kinds_[a] != NodeKind::Output ? x : y);
    siblings_[a].push_back(b);
    siblings_[b].push_back(a);
  }
  for (std::size_t i = 0; i < n; ++i) {
    sort_unique(children_[i]);
    sort_unique(parents_[i]);
    sort_unique(siblings_[i]);
    if (kinds_[i] == NodeKind::Latent && children_[i].empty())
      throw Error(ErrorCode::InvalidGraph, "latent node " + ids_[i] + " has no children", ids_[i]);
  }
}

std::optional<std::size_t> Dmg::find(const NodeId& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Dmg::index(const NodeId& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) throw Error(ErrorCode::UnknownNode, "unknown node '" + v + "'", v);
  return it->second;
}

std::vector<std::size_t> Dmg::indices(const NodeSet& s) const {
  std::vector<std::size_t> out;
  out.reserve(s.size());
  for (const auto& v : s) out.push_back(index(v));
  return out;
}

std::vector<bool> Dmg::mask(const NodeSet& s) const {
  std::vector<bool> m(size(), false);
  for (const auto& v : s) m[index(v)] = true;
  return m;
}

NodeSet Dmg::names(const std::vector<bool>& mask) const {
  NodeSet out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.insert(ids_[i]);
  return out;
}

NodeSet Dmg::names(const std::vector<std::size_t>& idx) const {
  NodeSet out;
  for (auto i : idx) out.insert(ids_[i]);
  return out;
}

bool Dmg::has_directed(const NodeId& from, const NodeId& to) const {
  const auto& ch = children_[index(from)];
  return std::binary_search(ch.begin(), ch.end(), index(to));
}

bool Dmg::has_bidirected(const NodeId& a, const NodeId& b) const {
  const auto& sib = siblings_[index(a)];
  return std::binary_search(sib.begin(), sib.end(), index(b));
}

EdgeList Dmg::directed_edges() const {
  EdgeList out;
  for (std::size_t i = 0; i < size(); ++i)
    for (auto j : children_[i]) out.emplace_back(ids_[i], ids_[j]);
  return out;
}

EdgeList Dmg::bidirected_edges() const {
  EdgeList out;
  for (std::size_t i = 0; i < size(); ++i)
    for (auto j : siblings_[i])
      if (i < j) out.emplace_back(ids_[i], ids_[j]);
  return out;
}

std::size_t Dmg::directed_count() const {
  std::size_t c = 0;
  for (const auto& ch : children_) c += ch.size();
  return c;
}

std::size_t Dmg::bidirected_count() const {
  std::size_t c = 0;
  for (const auto& s : siblings_) c += s.size();
  return c / 2;
}

NodeSet Dmg::nodes() const { return NodeSet(ids_.begin(), ids_.end()); }

NodeSet Dmg::nodes_of_kind(NodeKind kind) const {
  NodeSet out;
  for (std::size_t i = 0; i < size(); ++i)
    if (kinds_[i] == kind) out.insert(ids_[i]);
  return out;
}

bool Dmg::has_latents() const {
  return std::find(kinds_.begin(), kinds_.end(), NodeKind::Latent) != kinds_.end();
}

std::vector<std::pair<NodeId, NodeKind>> Dmg::node_list() const {
  std::vector<std::pair<NodeId, NodeKind>> out;
  for (std::size_t i = 0; i < size(); ++i) out.emplace_back(ids_[i], kinds_[i]);
  return out;
}

bool Dmg::operator==(const Dmg& other) const {
  return ids_ == other.ids_ && kinds_ == other.kinds_ && children_ == other.children_ &&
         siblings_ == other.siblings_;
}

DmgBuilder& DmgBuilder::node(NodeId id, NodeKind kind) {
  nodes_.emplace_back(std::move(id), kind);
  return *this;
}

DmgBuilder& DmgBuilder::edge(NodeId from, NodeId to) {
  directed_.emplace_back(std::move(from), std::move(to));
  return *this;
}

DmgBuilder& DmgBuilder::bi(NodeId a, NodeId b) {
  bidirected_.emplace_back(std::move(a), std::move(b));
  return *this;
}

DmgBuilder& DmgBuilder::path(std::initializer_list<NodeId> nodes) {
  const NodeId* prev = nullptr;
  for (const auto& v : nodes) {
    if (prev) edge(*prev, v);
    prev = &v;
  }
  return *this;
}

Dmg DmgBuilder::build() const { return Dmg(nodes_, directed_, bidirected_); }

std::string join(const NodeSet& s, std::string_view sep) {
  std::string out;
  for (const auto& v : s) {
    if (!out.empty()) out += sep;
    out += v;
  }
  return out;
}

}  // namespace ioscm
