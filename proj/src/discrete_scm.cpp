#include "ioscm/discrete_scm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ioscm/error.hpp"
#include "ioscm/graph_ops.hpp"
#include "ioscm/set_ops.hpp"

namespace ioscm {

namespace {

std::uint64_t configurations(const std::vector<NodeId>& vars, const std::map<NodeId, int>& cards) {
  std::uint64_t n = 1;
  for (const auto& v : vars) n *= static_cast<std::uint64_t>(cards.at(v));
  return n;
}

std::vector<NodeId> sorted(const NodeSet& s) { return {s.begin(), s.end()}; }

bool is_loop(const Dmg& g, const NodeSet& s) {
  const Dmg sub = induced_subgraph(g, s);
  return strongly_connected_components(sub).count() == 1;
}

// Output components of g in topological order.
std::vector<NodeSet> output_components(const Dmg& g) {
  std::vector<NodeSet> out;
  for (auto& c : strongly_connected_components(g).components(g))
    if (g.kind(*c.begin()) == NodeKind::Output) out.push_back(std::move(c));
  return out;
}

NodeSet outer_parents(const Dmg& g, const NodeSet& s) { return minus(parents(g, s), s); }

// Solves the nodes of `region` given values of everything feeding into it,
// using the registered mechanisms of the region's own components.
void solve_region(const DiscreteScm& m, const NodeSet& region, Assignment& values) {
  const Dmg sub = induced_subgraph(m.graph(), region);
  for (const auto& comp : strongly_connected_components(sub).components(sub)) {
    if (!m.has_mechanism(comp))
      throw Error(ErrorCode::MissingSubLoopMechanism, "no mechanism registered for loop {" + join(comp) + "}",
                  join(comp));
    m.apply(comp, values);
  }
}

std::vector<NodeId> missing_components(const DiscreteScm& m, const Dmg& g) {
  std::vector<NodeId> out;
  for (const auto& c : output_components(g))
    if (!m.has_mechanism(c)) out.push_back(join(c));
  return out;
}

}  // namespace

std::uint32_t encode(const std::vector<NodeId>& vars, const std::map<NodeId, int>& cards, const Assignment& a) {
  std::uint32_t code = 0;
  for (const auto& v : vars) code = code * static_cast<std::uint32_t>(cards.at(v)) + static_cast<std::uint32_t>(a.at(v));
  return code;
}

void decode(std::uint32_t code, const std::vector<NodeId>& vars, const std::map<NodeId, int>& cards, Assignment& a) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    const auto c = static_cast<std::uint32_t>(cards.at(*it));
    a[*it] = static_cast<int>(code % c);
    code /= c;
  }
}

DiscreteScm::DiscreteScm(Dmg graph, std::map<NodeId, int> cards, std::map<NodeId, std::vector<double>> noise,
                         std::vector<LoopMechanism> mechanisms)
    : graph_(std::move(graph)), cards_(std::move(cards)), noise_(std::move(noise)) {
  for (const auto& v : graph_.ids()) {
    auto it = cards_.find(v);
    if (it == cards_.end()) throw Error(ErrorCode::InvalidModel, "no domain size for " + v, v);
    if (it->second < 1) throw Error(ErrorCode::InvalidModel, "domain of " + v + " is empty", v);
  }
  for (const auto& [v, c] : cards_)
    if (!graph_.contains(v)) throw Error(ErrorCode::UnknownNode, "domain given for unknown node " + v, v);

  for (const auto& u : graph_.latents()) {
    auto it = noise_.find(u);
    if (it == noise_.end()) throw Error(ErrorCode::InvalidModel, "no distribution for latent " + u, u);
    const auto& p = it->second;
    if (p.size() != static_cast<std::size_t>(cards_.at(u)))
      throw Error(ErrorCode::InvalidModel, "distribution of " + u + " does not match its domain", u);
    double total = 0.0;
    for (double x : p) {
      if (!(x >= 0.0)) throw Error(ErrorCode::InvalidModel, "negative probability in distribution of " + u, u);
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidModel, "distribution of " + u + " does not sum to 1", u);
  }
  for (const auto& [u, p] : noise_)
    if (!graph_.contains(u) || graph_.kind(u) != NodeKind::Latent)
      throw Error(ErrorCode::InvalidModel, "distribution given for non-latent node " + u, u);

  const auto scc = strongly_connected_components(graph_);
  for (auto& mech : mechanisms) {
    if (mech.members.empty()) throw Error(ErrorCode::InvalidModel, "mechanism with an empty loop", "mechanisms");
    NodeSet loop(mech.members.begin(), mech.members.end());
    const std::string name = join(loop);
    for (const auto& v : loop) {
      if (graph_.kind(v) != NodeKind::Output)
        throw Error(ErrorCode::InvalidModel, "mechanism loop contains non-output node " + v, v);
      if (!scc.same(graph_.index(v), graph_.index(*loop.begin())) || !is_loop(graph_, loop))
        throw Error(ErrorCode::InvalidModel, "{" + name + "} is not a loop", name);
    }
    if (mechanisms_.count(loop)) throw Error(ErrorCode::InvalidModel, "duplicate mechanism for {" + name + "}", name);
    mech.members = sorted(loop);
    const auto pa = sorted(outer_parents(graph_, loop));
    if (!mech.parents.empty() && mech.parents != pa)
      throw Error(ErrorCode::InvalidModel, "mechanism parents of {" + name + "} do not match the graph", name);
    mech.parents = pa;
    if (mech.table.size() != configurations(mech.parents, cards_))
      throw Error(ErrorCode::InvalidModel, "mechanism table of {" + name + "} has the wrong size", name);
    const auto range = configurations(mech.members, cards_);
    for (auto code : mech.table)
      if (code >= range) throw Error(ErrorCode::InvalidModel, "mechanism table of {" + name + "} is out of range", name);
    mechanisms_.emplace(std::move(loop), std::move(mech));
  }
  const auto missing = missing_components(*this, graph_);
  if (!missing.empty())
    throw Error(ErrorCode::InvalidModel, "no mechanism for component {" + missing.front() + "}", missing.front());
}

void DiscreteScm::apply(const NodeSet& loop, Assignment& values) const {
  const auto& mech = mechanisms_.at(loop);
  decode(mech.table[encode(mech.parents, cards_, values)], mech.members, cards_, values);
}

DiscreteScm DiscreteScm::from_equations(Dmg graph, std::map<NodeId, int> cards,
                                        std::map<NodeId, std::vector<double>> noise, const LocalEquation& f) {
  std::vector<LoopMechanism> mechanisms;
  for (const auto& comp : output_components(graph)) {
    for (const auto& loop : enumerate_loops(graph, comp)) {
      LoopMechanism mech;
      mech.members = sorted(loop);
      mech.parents = sorted(outer_parents(graph, loop));
      const auto n_pa = configurations(mech.parents, cards);
      const auto n_loop = configurations(mech.members, cards);
      bool unique = true;
      Assignment values;
      for (std::uint64_t p = 0; p < n_pa && unique; ++p) {
        decode(static_cast<std::uint32_t>(p), mech.parents, cards, values);
        std::uint64_t found = 0, solution = 0;
        for (std::uint64_t x = 0; x < n_loop && found < 2; ++x) {
          decode(static_cast<std::uint32_t>(x), mech.members, cards, values);
          bool fixed = true;
          for (const auto& v : mech.members) {
            if (f(v, values) != values.at(v)) {
              fixed = false;
              break;
            }
          }
          if (fixed) {
            ++found;
            solution = x;
          }
        }
        unique = found == 1;
        mech.table.push_back(static_cast<std::uint32_t>(solution));
      }
      if (unique) {
        mechanisms.push_back(std::move(mech));
      } else if (loop == comp) {
        throw Error(ErrorCode::NotUniquelySolvable, "structural equations of {" + join(comp) + "} have no unique solution",
                    join(comp));
      }
    }
  }
  return DiscreteScm(std::move(graph), std::move(cards), std::move(noise), std::move(mechanisms));
}

void for_each_atom(const DiscreteScm& m, const AtomVisitor& visit, const Assignment& fixed, std::size_t max_states) {
  const Dmg& g = m.graph();
  std::vector<NodeId> inputs;
  Assignment values;
  for (const auto& j : g.inputs()) {
    auto it = fixed.find(j);
    if (it == fixed.end()) {
      inputs.push_back(j);
    } else {
      if (it->second < 0 || it->second >= m.card(j)) throw Error(ErrorCode::MalformedQuery, "value out of range for " + j, j);
      values[j] = it->second;
    }
  }
  for (const auto& [v, x] : fixed)
    if (!g.contains(v) || g.kind(v) != NodeKind::Input)
      throw Error(ErrorCode::MalformedQuery, v + " is not an input of the model", v);
  const auto latents = sorted(g.latents());
  const auto outputs = sorted(g.outputs());
  const auto n_inputs = configurations(inputs, m.cards());
  const auto n_latents = configurations(latents, m.cards());
  const auto n_table = configurations(outputs, m.cards()) * n_inputs;
  if (n_inputs * n_latents > max_states || n_table > max_states)
    throw Error(ErrorCode::StateSpaceTooLarge, "state space exceeds " + std::to_string(max_states) + " entries");

  const auto comps = output_components(g);
  for (std::uint64_t j = 0; j < n_inputs; ++j) {
    decode(static_cast<std::uint32_t>(j), inputs, m.cards(), values);
    for (std::uint64_t u = 0; u < n_latents; ++u) {
      decode(static_cast<std::uint32_t>(u), latents, m.cards(), values);
      double p = 1.0;
      for (const auto& l : latents) p *= m.noise().at(l)[static_cast<std::size_t>(values.at(l))];
      if (p == 0.0) continue;
      for (const auto& c : comps) m.apply(c, values);
      visit(values, p);
    }
  }
}

DiscreteJoint enumerate_joint(const DiscreteScm& m, const Assignment& fixed, std::size_t max_states) {
  const Dmg& g = m.graph();
  std::vector<NodeId> vars;
  std::vector<int> cards;
  NodeSet free_inputs;
  for (const auto& v : g.ids()) {
    if (g.kind(v) == NodeKind::Latent || fixed.count(v)) continue;
    if (g.kind(v) == NodeKind::Input) free_inputs.insert(v);
    vars.push_back(v);
    cards.push_back(m.card(v));
  }
  DiscreteJoint joint{Factor::zeros(vars, cards), g.outputs(), free_inputs};
  for_each_atom(m, [&](const Assignment& values, double p) { joint.table.at(values) += p; }, fixed, max_states);
  return joint;
}

DiscreteScm intervene_scm(const DiscreteScm& m, const NodeSet& w) {
  NodeSet targets;
  for (const auto& v : w) {
    const NodeKind kind = m.graph().kind(v);
    if (kind == NodeKind::Latent) throw Error(ErrorCode::MalformedQuery, "cannot intervene on latent " + v, v);
    if (kind == NodeKind::Output) targets.insert(v);
  }
  const Dmg g = intervene(m.graph(), targets);
  std::map<NodeId, int> cards;
  std::map<NodeId, std::vector<double>> noise;
  for (const auto& v : g.ids()) {
    cards[v] = m.card(v);
    if (g.kind(v) == NodeKind::Latent) noise[v] = m.noise().at(v);
  }
  std::vector<LoopMechanism> kept;
  for (const auto& [loop, mech] : m.mechanisms())
    if (disjoint(loop, targets)) kept.push_back(mech);
  for (const auto& c : output_components(g))
    if (!m.has_mechanism(c))
      throw Error(ErrorCode::MissingSubLoopMechanism,
                  "intervention leaves loop {" + join(c) + "} without a registered mechanism", join(c));
  return DiscreteScm(g, std::move(cards), std::move(noise), std::move(kept));
}

DiscreteJoint interventional_joint(const DiscreteScm& m, const Assignment& values) {
  NodeSet w;
  for (const auto& [v, x] : values) {
    if (x < 0 || x >= m.card(v)) throw Error(ErrorCode::MalformedQuery, "value out of range for " + v, v);
    w.insert(v);
  }
  return enumerate_joint(intervene_scm(m, w), values);
}

DiscreteScm extend_scm(const DiscreteScm& m) {
  const Dmg g = extend(m.graph());
  std::map<NodeId, int> cards = m.cards();
  for (const auto& v : m.graph().outputs()) cards[indicator_name(v)] = m.card(v) + 1;

  std::vector<LoopMechanism> mechanisms;
  for (const auto& comp : output_components(m.graph())) {
    LoopMechanism mech;
    mech.members = sorted(comp);
    mech.parents = sorted(outer_parents(g, comp));
    const auto n_pa = configurations(mech.parents, cards);
    Assignment values;
    for (std::uint64_t p = 0; p < n_pa; ++p) {
      decode(static_cast<std::uint32_t>(p), mech.parents, cards, values);
      NodeSet free;
      for (const auto& v : comp) {
        const int ind = values.at(indicator_name(v));
        if (ind == m.card(v)) {
          free.insert(v);
        } else {
          values[v] = ind;
        }
      }
      if (!free.empty()) solve_region(m, free, values);
      mech.table.push_back(encode(mech.members, cards, values));
    }
    mechanisms.push_back(std::move(mech));
  }
  return DiscreteScm(g, std::move(cards), m.noise(), std::move(mechanisms));
}

std::vector<CompatibilityViolation> validate_compatibility(const DiscreteScm& m) {
  std::vector<CompatibilityViolation> out;
  for (const auto& [outer, mech] : m.mechanisms()) {
    for (const auto& [inner, inner_mech] : m.mechanisms()) {
      if (inner == outer || !subset_of(inner, outer)) continue;
      const auto n_pa = configurations(mech.parents, m.cards());
      Assignment values;
      for (std::uint64_t p = 0; p < n_pa; ++p) {
        decode(static_cast<std::uint32_t>(p), mech.parents, m.cards(), values);
        m.apply(outer, values);
        Assignment check = values;
        m.apply(inner, check);
        if (check != values) {
          Assignment witness;
          for (const auto& v : mech.parents) witness[v] = values.at(v);
          out.push_back({outer, inner, std::move(witness)});
          break;
        }
      }
    }
  }
  return out;
}

DiscreteScm sub_model(const DiscreteScm& m, const NodeSet& d) {
  if (d.empty()) throw Error(ErrorCode::EmptyTarget, "sub-model target must be nonempty", "d");
  for (const auto& v : d)
    if (m.graph().kind(v) != NodeKind::Output)
      throw Error(ErrorCode::MalformedQuery, "sub-model target must contain output nodes only", v);
  const NodeSet pa = parents(m.graph(), d);
  NodeSet outside;
  for (const auto& p : pa)
    if (!d.count(p) && m.graph().kind(p) == NodeKind::Output) outside.insert(p);
  const Dmg g = induced_subgraph(intervene(m.graph(), outside), unite(d, pa));

  std::map<NodeId, int> cards;
  std::map<NodeId, std::vector<double>> noise;
  for (const auto& v : g.ids()) {
    cards[v] = m.card(v);
    if (g.kind(v) == NodeKind::Latent) noise[v] = m.noise().at(v);
  }
  std::vector<LoopMechanism> kept;
  for (const auto& [loop, mech] : m.mechanisms())
    if (subset_of(loop, d)) kept.push_back(mech);
  for (const auto& c : output_components(g))
    if (!m.has_mechanism(c))
      throw Error(ErrorCode::MissingSubLoopMechanism, "sub-model needs a mechanism for loop {" + join(c) + "}",
                  join(c));
  return DiscreteScm(g, std::move(cards), std::move(noise), std::move(kept));
}

std::vector<Assignment> sample(const DiscreteScm& m, const Assignment& inputs, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::MalformedQuery, "sample size must be positive", "n");
  const Dmg& g = m.graph();
  Assignment base;
  for (const auto& j : g.inputs()) {
    auto it = inputs.find(j);
    if (it == inputs.end()) throw Error(ErrorCode::MalformedQuery, "no value for input " + j, j);
    if (it->second < 0 || it->second >= m.card(j)) throw Error(ErrorCode::MalformedQuery, "value out of range for " + j, j);
    base[j] = it->second;
  }
  std::mt19937_64 rng(seed);
  std::map<NodeId, std::discrete_distribution<int>> draws;
  for (const auto& u : g.latents()) {
    const auto& p = m.noise().at(u);
    draws.emplace(u, std::discrete_distribution<int>(p.begin(), p.end()));
  }
  const auto comps = output_components(g);
  std::vector<Assignment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Assignment values = base;
    for (auto& [u, dist] : draws) values[u] = dist(rng);
    for (const auto& c : comps) m.apply(c, values);
    for (const auto& u : g.latents()) values.erase(u);
    out.push_back(std::move(values));
  }
  return out;
}

}  // namespace ioscm
