#include "ioscm/graph_ops.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>

#include "ioscm/error.hpp"

namespace ioscm {

namespace {

using Mask = std::vector<bool>;

// Rebuilds a graph from index-level data, dropping latents without children.
Dmg assemble(const std::vector<std::pair<NodeId, NodeKind>>& nodes, const EdgeList& directed,
             const EdgeList& bidirected) {
  NodeSet with_children;
  for (const auto& [a, b] : directed) with_children.insert(a);
  std::vector<std::pair<NodeId, NodeKind>> kept;
  for (const auto& [id, kind] : nodes)
    if (kind != NodeKind::Latent || with_children.count(id)) kept.emplace_back(id, kind);
  return Dmg(std::move(kept), directed, bidirected);
}

}  // namespace

NodeSet SccPartition::component_of(const Dmg& g, const NodeId& v) const {
  return g.names(members[component[g.index(v)]]);
}

std::vector<NodeSet> SccPartition::components(const Dmg& g) const {
  std::vector<NodeSet> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(g.names(m));
  return out;
}

SccPartition strongly_connected_components(const Dmg& g) {
  const std::size_t n = g.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> order(n, kUnvisited), low(n, 0), raw(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0, raw_count = 0;

  // Iterative Tarjan: frames hold (node, next child position).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& ch = g.children(v);
      if (pos < ch.size()) {
        const std::size_t w = ch[pos++];
        if (order[w] == kUnvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == order[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          raw[w] = raw_count;
        } while (w != done);
        ++raw_count;
      }
    }
  }

  std::vector<std::vector<std::size_t>> raw_members(raw_count);
  for (std::size_t v = 0; v < n; ++v) raw_members[raw[v]].push_back(v);
  std::vector<std::size_t> indegree(raw_count, 0);
  std::vector<std::vector<std::size_t>> succ(raw_count);
  for (std::size_t v = 0; v < n; ++v)
    for (auto w : g.children(v))
      if (raw[v] != raw[w]) succ[raw[v]].push_back(raw[w]);
  for (auto& s : succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (auto c : s) ++indegree[c];
  }

  // Kahn's algorithm keyed by the smallest member index (ids are sorted).
  using Key = std::pair<std::size_t, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (std::size_t c = 0; c < raw_count; ++c)
    if (indegree[c] == 0) ready.emplace(raw_members[c].front(), c);

  SccPartition out;
  out.component.assign(n, 0);
  while (!ready.empty()) {
    const std::size_t c = ready.top().second;
    ready.pop();
    for (auto v : raw_members[c]) out.component[v] = out.members.size();
    out.members.push_back(raw_members[c]);
    for (auto d : succ[c])
      if (--indegree[d] == 0) ready.emplace(raw_members[d].front(), d);
  }
  return out;
}

std::vector<NodeSet> enumerate_loops(const Dmg& g, const NodeSet& within) {
  if (within.empty()) return {};
  const auto idx = g.indices(within);
  const auto scc = strongly_connected_components(g);
  for (auto i : idx)
    if (!scc.same(i, idx.front()))
      throw Error(ErrorCode::SccBoundViolation, "loop enumeration set spans several strongly connected components",
                  g.id(i));
  if (idx.size() > 20)
    throw Error(ErrorCode::GraphTooLarge, "loop enumeration is limited to 20 nodes");

  const std::size_t k = idx.size();
  std::vector<std::uint32_t> adj(k, 0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (std::binary_search(g.children(idx[a]).begin(), g.children(idx[a]).end(), idx[b])) adj[a] |= 1u << b;

  auto reach = [&](std::uint32_t subset, std::size_t start, bool forward) {
    std::uint32_t seen = 1u << start, frontier = seen;
    while (frontier) {
      std::uint32_t next = 0;
      for (std::size_t a = 0; a < k; ++a) {
        if (!(subset >> a & 1u)) continue;
        if (forward) {
          if (frontier >> a & 1u) next |= adj[a] & subset;
        } else if (adj[a] & frontier) {
          next |= 1u << a;
        }
      }
      frontier = next & ~seen;
      seen |= next;
    }
    return seen;
  };

  std::vector<NodeSet> out;
  for (std::uint32_t subset = 1; subset < (1u << k); ++subset) {
    std::size_t first = 0;
    while (!(subset >> first & 1u)) ++first;
    if (reach(subset, first, true) == subset && reach(subset, first, false) == subset) {
      NodeSet loop;
      for (std::size_t a = 0; a < k; ++a)
        if (subset >> a & 1u) loop.insert(g.id(idx[a]));
      out.push_back(std::move(loop));
    }
  }
  std::sort(out.begin(), out.end(), [](const NodeSet& a, const NodeSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::vector<bool> ancestor_mask(const Dmg& g, const std::vector<bool>& seeds, const std::vector<bool>* allowed) {
  Mask seen = seeds;
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (seen[i]) todo.push_back(i);
  while (!todo.empty()) {
    const auto v = todo.back();
    todo.pop_back();
    for (auto p : g.parents(v)) {
      if (seen[p] || (allowed && !(*allowed)[p])) continue;
      seen[p] = true;
      todo.push_back(p);
    }
  }
  return seen;
}

std::vector<bool> descendant_mask(const Dmg& g, const std::vector<bool>& seeds, const std::vector<bool>* allowed) {
  Mask seen = seeds;
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (seen[i]) todo.push_back(i);
  while (!todo.empty()) {
    const auto v = todo.back();
    todo.pop_back();
    for (auto c : g.children(v)) {
      if (seen[c] || (allowed && !(*allowed)[c])) continue;
      seen[c] = true;
      todo.push_back(c);
    }
  }
  return seen;
}

NodeSet ancestors(const Dmg& g, const NodeSet& s) { return g.names(ancestor_mask(g, g.mask(s))); }

NodeSet descendants(const Dmg& g, const NodeSet& s) { return g.names(descendant_mask(g, g.mask(s))); }

NodeSet parents(const Dmg& g, const NodeSet& s) {
  NodeSet out;
  for (auto i : g.indices(s))
    for (auto p : g.parents(i)) out.insert(g.id(p));
  return out;
}

NodeSet children(const Dmg& g, const NodeSet& s) {
  NodeSet out;
  for (auto i : g.indices(s))
    for (auto c : g.children(i)) out.insert(g.id(c));
  return out;
}

bool is_acyclic(const Dmg& g) {
  const auto scc = strongly_connected_components(g);
  if (scc.count() != g.size()) return false;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::binary_search(g.children(i).begin(), g.children(i).end(), i)) return false;
  return true;
}

Dmg induced_subgraph(const Dmg& g, const NodeSet& keep) {
  const Mask in = g.mask(keep);
  std::vector<std::pair<NodeId, NodeKind>> nodes;
  EdgeList directed, bidirected;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!in[i]) continue;
    nodes.emplace_back(g.id(i), g.kind(i));
    for (auto c : g.children(i))
      if (in[c]) directed.emplace_back(g.id(i), g.id(c));
    for (auto s : g.siblings(i))
      if (in[s] && i < s) bidirected.emplace_back(g.id(i), g.id(s));
  }
  return assemble(nodes, directed, bidirected);
}

Dmg marginalize(const Dmg& g, const NodeSet& w) {
  const Mask in_w = g.mask(w);
  for (auto i : g.indices(w))
    if (g.kind(i) == NodeKind::Input)
      throw Error(ErrorCode::InputMarginalization, "cannot marginalize input node " + g.id(i), g.id(i));
  const std::size_t n = g.size();

  // roots[v]: nodes of W from which a directed path with all nodes in W
  // reaches v, plus v itself.
  std::vector<Mask> roots(n, Mask(n, false));
  std::vector<Mask> reach(n, Mask(n, false));
  for (std::size_t v = 0; v < n; ++v) {
    if (in_w[v]) continue;
    roots[v][v] = true;
    std::vector<std::size_t> todo;
    for (auto p : g.parents(v))
      if (in_w[p] && !roots[v][p]) roots[v][p] = true, todo.push_back(p);
    while (!todo.empty()) {
      const auto u = todo.back();
      todo.pop_back();
      for (auto p : g.parents(u))
        if (in_w[p] && !roots[v][p]) roots[v][p] = true, todo.push_back(p);
    }
    std::vector<bool> seen(n, false);
    for (auto c : g.children(v))
      if (!seen[c]) seen[c] = true, todo.push_back(c);
    while (!todo.empty()) {
      const auto u = todo.back();
      todo.pop_back();
      if (!in_w[u]) {
        reach[v][u] = true;
        continue;
      }
      for (auto c : g.children(u))
        if (!seen[c]) seen[c] = true, todo.push_back(c);
    }
  }

  std::vector<std::pair<NodeId, NodeKind>> nodes;
  EdgeList directed, bidirected;
  for (std::size_t v = 0; v < n; ++v) {
    if (in_w[v]) continue;
    nodes.emplace_back(g.id(v), g.kind(v));
    for (std::size_t u = 0; u < n; ++u)
      if (reach[v][u]) directed.emplace_back(g.id(v), g.id(u));
  }

  // Nodes bidirected-adjacent to some member of roots[v].
  std::vector<Mask> touched(n, Mask(n, false));
  for (std::size_t v = 0; v < n; ++v) {
    if (in_w[v]) continue;
    for (std::size_t r = 0; r < n; ++r)
      if (roots[v][r])
        for (auto s : g.siblings(r)) touched[v][s] = true;
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (in_w[a]) continue;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (in_w[b]) continue;
      bool edge = false;
      for (std::size_t r = 0; r < n && !edge; ++r) {
        if (in_w[r] && roots[a][r] && roots[b][r]) edge = true;
        if (roots[b][r] && touched[a][r]) edge = true;
      }
      if (edge) bidirected.emplace_back(g.id(a), g.id(b));
    }
  }
  return assemble(nodes, directed, bidirected);
}

Dmg induced_dmg(const Dmg& gplus) {
  if (!gplus.has_latents()) return gplus;
  return marginalize(gplus, gplus.latents());
}

Dmg intervene(const Dmg& g, const NodeSet& w) {
  const Mask in_w = g.mask(w);
  for (auto i : g.indices(w))
    if (g.kind(i) == NodeKind::Latent)
      throw Error(ErrorCode::MalformedQuery, "cannot intervene on latent node " + g.id(i), g.id(i));
  std::vector<std::pair<NodeId, NodeKind>> nodes;
  EdgeList directed, bidirected;
  for (std::size_t i = 0; i < g.size(); ++i) {
    nodes.emplace_back(g.id(i), in_w[i] ? NodeKind::Input : g.kind(i));
    for (auto c : g.children(i))
      if (!in_w[c]) directed.emplace_back(g.id(i), g.id(c));
    for (auto s : g.siblings(i))
      if (i < s && !in_w[i] && !in_w[s]) bidirected.emplace_back(g.id(i), g.id(s));
  }
  return assemble(nodes, directed, bidirected);
}

NodeId indicator_name(const NodeId& v) { return "I_" + v; }

Dmg extend(const Dmg& g) {
  auto nodes = g.node_list();
  auto directed = g.directed_edges();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.kind(i) != NodeKind::Output) continue;
    const NodeId name = indicator_name(g.id(i));
    if (g.contains(name))
      throw Error(ErrorCode::NameCollision, "indicator name " + name + " is already a node", name);
    nodes.emplace_back(name, NodeKind::Input);
    directed.emplace_back(name, g.id(i));
  }
  return Dmg(std::move(nodes), std::move(directed), g.bidirected_edges());
}

Dmg acyclify(const Dmg& g) {
  if (g.has_latents()) throw Error(ErrorCode::InvalidGraph, "acyclification expects a graph without latent nodes");
  const auto scc = strongly_connected_components(g);
  const std::size_t n = g.size();
  const std::size_t k = scc.count();

  std::vector<Mask> comp_parents(k, Mask(n, false));
  for (std::size_t v = 0; v < n; ++v)
    for (auto c : g.children(v))
      if (!scc.same(v, c)) comp_parents[scc.component[c]][v] = true;

  std::vector<Mask> comp_bi(k, Mask(k, false));
  for (std::size_t v = 0; v < n; ++v)
    for (auto s : g.siblings(v)) comp_bi[scc.component[v]][scc.component[s]] = true;

  EdgeList directed, bidirected;
  for (std::size_t w = 0; w < n; ++w) {
    const auto& ps = comp_parents[scc.component[w]];
    for (std::size_t v = 0; v < n; ++v)
      if (ps[v]) directed.emplace_back(g.id(v), g.id(w));
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto ca = scc.component[a], cb = scc.component[b];
      if (ca == cb || comp_bi[ca][cb]) bidirected.emplace_back(g.id(a), g.id(b));
    }
  return Dmg(g.node_list(), std::move(directed), std::move(bidirected));
}

NodeId twin_name(const NodeId& v) { return v + "'"; }

Dmg twin_graph(const Dmg& g, const NodeSet& w) {
  const Mask in_w = g.mask(w);
  for (auto i : g.indices(w))
    if (g.kind(i) == NodeKind::Latent)
      throw Error(ErrorCode::MalformedQuery, "cannot intervene on latent node " + g.id(i), g.id(i));
  if (w.empty()) return g;
  const Mask desc = descendant_mask(g, in_w);
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i)
    if (desc[i] && g.contains(twin_name(g.id(i))))
      throw Error(ErrorCode::NameCollision, "twin name " + twin_name(g.id(i)) + " is already a node",
                  twin_name(g.id(i)));

  auto primed = [&](std::size_t i) { return desc[i] ? twin_name(g.id(i)) : g.id(i); };

  std::vector<std::pair<NodeId, NodeKind>> nodes = g.node_list();
  for (std::size_t i = 0; i < n; ++i)
    if (desc[i]) nodes.emplace_back(twin_name(g.id(i)), in_w[i] ? NodeKind::Input : g.kind(i));

  EdgeList directed = g.directed_edges();
  for (std::size_t a = 0; a < n; ++a)
    for (auto b : g.children(a))
      if (desc[b] && !in_w[b]) directed.emplace_back(primed(a), twin_name(g.id(b)));

  EdgeList bidirected = g.bidirected_edges();
  for (std::size_t a = 0; a < n; ++a)
    for (auto b : g.siblings(a)) {
      // Ordered pairs (a,b) visit both cross-branch combinations. Only the
      // intervened copies lose their confounding.
      if (desc[b] && !in_w[b]) bidirected.emplace_back(g.id(a), twin_name(g.id(b)));
      if (desc[a] && desc[b] && !in_w[a] && !in_w[b] && a < b)
        bidirected.emplace_back(twin_name(g.id(a)), twin_name(g.id(b)));
    }

  const bool latent_level = g.has_latents();
  if (!latent_level) {
    // Without explicit latents each duplicated node shares its own noise
    // with its copy.
    for (std::size_t i = 0; i < n; ++i)
      if (desc[i] && !in_w[i] && g.kind(i) == NodeKind::Output)
        bidirected.emplace_back(g.id(i), twin_name(g.id(i)));
  }
  Dmg twin(std::move(nodes), std::move(directed), std::move(bidirected));
  return latent_level ? induced_dmg(twin) : twin;
}

Dmg input_confound(const Dmg& g) {
  const NodeSet inputs = g.inputs();
  if (inputs.size() <= 1) return g;
  auto nodes = g.node_list();
  for (auto& [id, kind] : nodes)
    if (kind == NodeKind::Input) kind = NodeKind::Output;
  auto bidirected = g.bidirected_edges();
  for (auto a = inputs.begin(); a != inputs.end(); ++a)
    for (auto b = std::next(a); b != inputs.end(); ++b) bidirected.emplace_back(*a, *b);
  return Dmg(std::move(nodes), g.directed_edges(), std::move(bidirected));
}

}  // namespace ioscm
