#include "oracles.hpp"

#include <algorithm>

#include "ioscm/graph_ops.hpp"
#include "ioscm/identify.hpp"
#include "ioscm/set_ops.hpp"

namespace oracle {

using ioscm::Dmg;
using ioscm::Factor;
using ioscm::NodeId;
using ioscm::NodeSet;

Factor conditional(const ioscm::DiscreteJoint& joint, const NodeSet& target, const NodeSet& given) {
  const Factor num = joint.table.marginal(ioscm::unite(ioscm::unite(target, given), joint.inputs));
  return num.divide(num.sum_out(target));
}

std::vector<NodeSet> districts(const Dmg& g) {
  std::vector<NodeSet> out;
  NodeSet seen;
  for (const auto& v : g.outputs()) {
    if (seen.count(v)) continue;
    NodeSet d{v};
    std::vector<std::size_t> todo{g.index(v)};
    while (!todo.empty()) {
      const auto i = todo.back();
      todo.pop_back();
      for (auto s : g.siblings(i))
        if (d.insert(g.id(s)).second) todo.push_back(s);
    }
    seen.insert(d.begin(), d.end());
    out.push_back(std::move(d));
  }
  return out;
}

namespace {

// Product of P(v | predecessors of v) over v in s, with predecessors taken in
// the topological order of g over all of g's nodes.
Factor chain_product(const Dmg& g, const NodeSet& s, const Factor& p) {
  const NodeSet v_all = g.outputs();
  const auto order = ioscm::apt_order(g);
  Factor out = Factor::constant(1.0);
  NodeSet before;
  for (const auto& v : order) {
    if (s.count(v)) {
      NodeSet keep = before;
      keep.insert(v);
      const Factor num = p.sum_out(ioscm::minus(v_all, keep));
      out = out.product(num.divide(num.sum_out({v})));
    }
    before.insert(v);
  }
  return out;
}

std::optional<Factor> id_rec(const NodeSet& y, const NodeSet& x, const Factor& p, const Dmg& g) {
  const NodeSet v = g.outputs();
  if (x.empty()) return p.sum_out(ioscm::minus(v, y));

  const NodeSet an = ioscm::intersect(ioscm::ancestors(g, y), v);
  if (an != v)
    return id_rec(y, ioscm::intersect(x, an), p.sum_out(ioscm::minus(v, an)), ioscm::induced_subgraph(g, an));

  const NodeSet an_cut = ioscm::ancestors(ioscm::intervene(g, x), y);
  const NodeSet w = ioscm::minus(ioscm::minus(v, x), an_cut);
  if (!w.empty()) return id_rec(y, ioscm::unite(x, w), p, g);

  const auto parts = districts(ioscm::induced_subgraph(g, ioscm::minus(v, x)));
  if (parts.size() > 1) {
    Factor out = Factor::constant(1.0);
    for (const auto& s : parts) {
      auto f = id_rec(s, ioscm::minus(v, s), p, g);
      if (!f) return std::nullopt;
      out = out.product(*f);
    }
    return out.sum_out(ioscm::minus(v, ioscm::unite(y, x)));
  }

  const NodeSet& s = parts.front();
  const auto whole = districts(g);
  if (whole.size() == 1) return std::nullopt;
  if (std::find(whole.begin(), whole.end(), s) != whole.end())
    return chain_product(g, s, p).sum_out(ioscm::minus(s, y));
  for (const auto& big : whole) {
    if (!ioscm::subset_of(s, big)) continue;
    const Factor q = chain_product(g, big, p);
    return id_rec(y, ioscm::intersect(x, big), q, ioscm::induced_subgraph(g, big));
  }
  return std::nullopt;
}

}  // namespace

std::optional<Factor> acyclic_id(const Dmg& g, const NodeSet& y, const NodeSet& x, const Factor& p) {
  return id_rec(y, x, p, g);
}

}  // namespace oracle
