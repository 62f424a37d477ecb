#include "ioscm/identify.hpp"

#include <algorithm>
#include <map>

#include "ioscm/error.hpp"
#include "ioscm/graph_ops.hpp"
#include "ioscm/set_ops.hpp"

namespace ioscm {

NodeSet consolidated_district(const Dmg& g, const NodeSet& b) {
  for (const auto& v : b)
    if (g.kind(v) != NodeKind::Output)
      throw Error(ErrorCode::MalformedQuery, "consolidated districts are defined for output nodes", v);
  const auto scc = strongly_connected_components(g);
  std::vector<bool> seen = g.mask(b);
  std::vector<std::size_t> todo = g.indices(b);
  auto push = [&](std::size_t u) {
    if (seen[u] || g.kind(u) != NodeKind::Output) return;
    seen[u] = true;
    todo.push_back(u);
  };
  while (!todo.empty()) {
    const auto v = todo.back();
    todo.pop_back();
    for (auto s : g.siblings(v)) push(s);
    for (auto m : scc.members[scc.component[v]]) push(m);
  }
  return g.names(seen);
}

std::vector<NodeSet> consolidated_districts(const Dmg& g) {
  std::vector<NodeSet> out;
  NodeSet covered;
  for (const auto& v : g.outputs()) {
    if (covered.count(v)) continue;
    NodeSet d = consolidated_district(g, {v});
    covered.insert(d.begin(), d.end());
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<NodeId> apt_order(const Dmg& g) {
  const auto scc = strongly_connected_components(g);
  std::vector<NodeId> out;
  out.reserve(g.size());
  for (const auto& members : scc.members)
    for (auto i : members) out.push_back(g.id(i));
  return out;
}

Dmg subgraph_for(const Dmg& g, const NodeSet& c) {
  if (c.empty()) throw Error(ErrorCode::EmptyTarget, "sub-model target must be nonempty", "c");
  for (const auto& v : c)
    if (g.kind(v) != NodeKind::Output)
      throw Error(ErrorCode::MalformedQuery, "sub-model target must contain output nodes only", v);
  const NodeSet pa = parents(g, c);
  NodeSet outside;
  for (const auto& p : pa)
    if (!c.count(p) && g.kind(p) != NodeKind::Latent) outside.insert(p);
  const Dmg cut = intervene(g, outside);
  return induced_subgraph(cut, unite(c, pa));
}

namespace {

// State shared across the recursion for one query.
class Identifier {
 public:
  explicit Identifier(const Dmg& g) : g_(g), order_(apt_order(g)) {
    for (std::size_t i = 0; i < order_.size(); ++i) position_[order_[i]] = i;
    inputs_ = g.inputs();
  }

  IdResult run(const NodeSet& y, const NodeSet& w) {
    const NodeSet v = g_.outputs();
    const NodeSet keep = minus(v, w);
    const Dmg g_keep = induced_subgraph(g_, keep);
    const NodeSet h = ancestors(g_keep, y);
    const Dmg g_h = induced_subgraph(g_, h);

    std::vector<EstimandPtr> parts;
    for (const auto& c : consolidated_districts(g_h)) {
      const NodeSet d = consolidated_district(g_, c);
      EstimandPtr q = id_cd(c, d, district_product(g_, d));
      if (q->failed()) return {false, q};
      parts.push_back(std::move(q));
    }

    // Expand products so every factor is ordered globally.
    std::vector<std::pair<EstimandPtr, NodeSet>> flat;
    for (const auto& p : parts) {
      if (p->kind == EstimandKind::Product) {
        for (std::size_t i = 0; i < p->children.size(); ++i) flat.emplace_back(p->children[i], p->sccs[i]);
      } else {
        flat.emplace_back(p, NodeSet{});
      }
    }
    std::stable_sort(flat.begin(), flat.end(),
                     [&](const auto& a, const auto& b) { return first_position(*a.first) < first_position(*b.first); });
    EstimandPtr q_h;
    if (flat.size() == 1) {
      q_h = flat.front().first;
    } else {
      std::vector<EstimandPtr> factors;
      std::vector<NodeSet> sccs;
      for (auto& [f, s] : flat) {
        factors.push_back(f);
        sccs.push_back(s);
      }
      q_h = Estimand::product(std::move(factors), std::move(sccs));
    }
    return {true, Estimand::marginal(q_h, minus(h, y))};
  }

 private:
  std::size_t first_position(const Estimand& e) const {
    std::size_t best = order_.size();
    for (const auto& v : e.free_vars()) best = std::min(best, position_.at(v));
    return best;
  }

  // Nodes up to the last member of s in the apt-order, without s.
  NodeSet pred_before(const NodeSet& s) const {
    std::size_t last = 0;
    for (const auto& v : s) last = std::max(last, position_.at(v));
    NodeSet out;
    for (std::size_t i = 0; i <= last; ++i)
      if (!s.count(order_[i])) out.insert(order_[i]);
    return out;
  }

  // Strongly connected components of `graph` inside `d`, in apt-order of g.
  std::vector<NodeSet> components_within(const Dmg& graph, const NodeSet& d) const {
    std::vector<NodeSet> out;
    for (const auto& comp : strongly_connected_components(graph).components(graph))
      if (subset_of(comp, d)) out.push_back(comp);
    std::sort(out.begin(), out.end(), [&](const NodeSet& a, const NodeSet& b) {
      return position_.at(*a.begin()) < position_.at(*b.begin());
    });
    return out;
  }

  // Q[D] for a consolidated district D of the full graph.
  EstimandPtr district_product(const Dmg& graph, const NodeSet& d) const {
    const NodeSet v = g_.outputs();
    std::vector<EstimandPtr> factors;
    std::vector<NodeSet> sccs;
    for (const auto& s : components_within(graph, d)) {
      factors.push_back(Estimand::kernel(s, intersect(pred_before(s), v), inputs_));
      sccs.push_back(s);
    }
    return Estimand::product(std::move(factors), std::move(sccs));
  }

  EstimandPtr id_cd(const NodeSet& c, const NodeSet& d, EstimandPtr q_d) const {
    const Dmg g_d = subgraph_for(g_, d);
    const NodeSet a = intersect(ancestors(g_d, c), d);
    EstimandPtr q_a = Estimand::marginal(q_d, minus(d, a));
    if (a == c) return q_a;
    if (a == d) return Estimand::fail();
    const Dmg g_a = subgraph_for(g_, a);
    const NodeSet d_next = consolidated_district(g_a, c);
    std::vector<EstimandPtr> factors;
    std::vector<NodeSet> sccs;
    for (const auto& s : components_within(g_a, d_next)) {
      factors.push_back(Estimand::conditional(q_a, s, intersect(pred_before(s), a)));
      sccs.push_back(s);
    }
    return id_cd(c, d_next, Estimand::product(std::move(factors), std::move(sccs)));
  }

  const Dmg& g_;
  std::vector<NodeId> order_;
  std::map<NodeId, std::size_t> position_;
  NodeSet inputs_;
};

}  // namespace

IdResult identify(const Dmg& graph, const IdQuery& q) {
  const Dmg g = induced_dmg(graph);
  if (q.y.empty()) throw Error(ErrorCode::MalformedQuery, "y must be nonempty", "y");
  for (const auto& v : q.y) {
    if (!g.contains(v)) throw Error(ErrorCode::UnknownNode, "unknown node '" + v + "'", v);
    if (g.kind(v) != NodeKind::Output) throw Error(ErrorCode::MalformedQuery, "y must contain output nodes only", v);
  }
  for (const auto& v : q.w) {
    if (!g.contains(v)) throw Error(ErrorCode::UnknownNode, "unknown node '" + v + "'", v);
    if (q.y.count(v)) throw Error(ErrorCode::MalformedQuery, "y and the intervention set overlap", v);
  }
  return Identifier(g).run(q.y, q.w);
}

}  // namespace ioscm
