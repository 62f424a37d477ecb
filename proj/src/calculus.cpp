#include "ioscm/calculus.hpp"

#include "ioscm/error.hpp"
#include "ioscm/graph_ops.hpp"
#include "ioscm/set_ops.hpp"

namespace ioscm {

namespace {

void require_outputs(const Dmg& g, const NodeSet& s, const char* role) {
  for (const auto& v : s) {
    if (!g.contains(v)) throw Error(ErrorCode::UnknownNode, "unknown node '" + v + "'", v);
    if (g.kind(v) != NodeKind::Output)
      throw Error(ErrorCode::MalformedQuery, std::string(role) + " must contain output nodes only", v);
  }
}

void require_disjoint(const NodeSet& a, const NodeSet& b, const char* role) {
  for (const auto& v : a)
    if (b.count(v)) throw Error(ErrorCode::MalformedQuery, std::string(role) + " sets overlap at " + v, v);
}

}  // namespace

Dmg extended_intervened(const Dmg& g, const NodeSet& w) {
  NodeSet outputs_in_w;
  for (const auto& v : w)
    if (g.kind(v) == NodeKind::Output) outputs_in_w.insert(v);
  return extend(intervene(induced_dmg(g), outputs_in_w));
}

std::string render_kernel(const NodeSet& target, const std::vector<std::string>& given, const NodeSet& d) {
  std::string out = "P(" + join(target);
  std::string rest;
  for (const auto& part : given) {
    if (part.empty()) continue;
    if (!rest.empty()) rest += ",";
    rest += part;
  }
  if (!d.empty()) rest += (rest.empty() ? "" : ",") + std::string("do(") + join(d) + ")";
  if (!rest.empty()) out += "|" + rest;
  return out + ")";
}

RuleVerdict check_rule(const Dmg& g, const RuleQuery& q) {
  const Dmg base = induced_dmg(g);
  if (q.y.empty()) throw Error(ErrorCode::MalformedQuery, "y must be nonempty", "y");
  require_outputs(base, q.x, "x");
  require_outputs(base, q.y, "y");
  require_outputs(base, q.z, "z");
  require_disjoint(q.x, q.y, "x/y");
  require_disjoint(q.x, q.z, "x/z");
  require_disjoint(q.y, q.z, "y/z");
  for (const auto& v : q.w) {
    if (!base.contains(v)) throw Error(ErrorCode::UnknownNode, "unknown node '" + v + "'", v);
    if (base.kind(v) == NodeKind::Latent) throw Error(ErrorCode::MalformedQuery, "w cannot contain latent nodes", v);
  }
  require_disjoint(q.w, unite(unite(q.x, q.y), q.z), "w");

  const NodeSet w = unite(q.w, base.inputs());
  const NodeSet w_out = minus(w, base.inputs());

  RuleVerdict verdict;
  verdict.graph_used = extended_intervened(base, w);
  SeparationQuery& sq = verdict.separation_checked;
  sq.a = q.y;
  sq.c = q.z;
  if (q.condition_on_inputs) sq.c.insert(w_out.begin(), w_out.end());
  NodeSet indicators;
  for (const auto& v : q.x) indicators.insert(indicator_name(v));
  switch (q.rule) {
    case Rule::One:
      sq.b = q.x;
      break;
    case Rule::Two:
      sq.b = indicators;
      sq.c.insert(q.x.begin(), q.x.end());
      break;
    case Rule::Three:
      sq.b = indicators;
      break;
  }
  // An empty X makes the rule hold vacuously.
  verdict.applicable = Separator(verdict.graph_used).separated(sq.a, sq.b, sq.c, sq.notion);
  if (!verdict.applicable) return verdict;

  const std::string x = join(q.x), z = join(q.z);
  const std::string do_x = q.x.empty() ? "" : "do(" + x + ")";
  std::string lhs, rhs;
  switch (q.rule) {
    case Rule::One:
      lhs = render_kernel(q.y, {x, z}, w);
      rhs = render_kernel(q.y, {z}, w);
      break;
    case Rule::Two:
      lhs = render_kernel(q.y, {do_x, z}, w);
      rhs = render_kernel(q.y, {x, z}, w);
      break;
    case Rule::Three:
      lhs = render_kernel(q.y, {do_x, z}, w);
      rhs = render_kernel(q.y, {z}, w);
      break;
  }
  verdict.conclusion = lhs + " = " + rhs;
  return verdict;
}

bool check_mechanism_change(const Dmg& g, const NodeSet& a, const NodeSet& b, const NodeSet& i) {
  for (const auto& v : i) {
    if (!g.contains(v)) throw Error(ErrorCode::UnknownNode, "unknown node '" + v + "'", v);
    if (g.kind(v) != NodeKind::Input) throw Error(ErrorCode::MalformedQuery, "i must contain input nodes only", v);
  }
  require_outputs(g, a, "a");
  require_outputs(g, b, "b");
  return sigma_separated(g, a, i, unite(b, minus(g.inputs(), i)));
}

bool check_ignorability(const Dmg& g, const NodeSet& y, const NodeSet& x, const NodeSet& z, bool strong) {
  const Dmg base = induced_dmg(g);
  require_outputs(base, y, "y");
  require_outputs(base, x, "x");
  require_outputs(base, z, "z");
  require_disjoint(x, y, "x/y");
  if (x.empty()) return true;
  const Dmg twin = twin_graph(base, x);
  const NodeSet desc = descendants(base, x);
  NodeSet targets;
  for (const auto& v : y) {
    targets.insert(desc.count(v) ? twin_name(v) : v);
    if (strong) targets.insert(v);
  }
  return sigma_separated(twin, targets, x, z);
}

}  // namespace ioscm
