#include "ioscm/separation.hpp"

#include "ioscm/error.hpp"

namespace ioscm {

std::string_view to_string(Notion notion) { return notion == Notion::Sigma ? "sigma" : "d"; }

Notion parse_notion(std::string_view text) {
  if (text == "sigma") return Notion::Sigma;
  if (text == "d") return Notion::D;
  throw Error(ErrorCode::MalformedQuery, "notion must be 'sigma' or 'd'", "notion");
}

Separator::Separator(const Dmg& g) : g_(g), scc_(strongly_connected_components(g)) {}

std::vector<bool> Separator::checked_mask(const NodeSet& s) const {
  for (const auto& v : s)
    if (g_.kind(v) == NodeKind::Latent)
      throw Error(ErrorCode::LatentInQuery, "latent node " + v + " cannot appear in a separation query", v);
  return g_.mask(s);
}

bool Separator::separated(const NodeSet& a, const NodeSet& b, const NodeSet& c, Notion notion) const {
  return separated(checked_mask(a), checked_mask(b), checked_mask(c), notion);
}

namespace {

enum Arrival : std::size_t { kViaHead = 0, kViaTail = 1 };

}  // namespace

bool Separator::separated(const std::vector<bool>& a, const std::vector<bool>& b, const std::vector<bool>& c,
                          Notion notion) const {
  const std::size_t n = g_.size();
  const bool sigma = notion == Notion::Sigma;
  // Two nodes are in the same SCC in the sense used by the walk rules; for
  // d-separation every SCC is a singleton.
  auto same = [&](std::size_t u, std::size_t v) { return sigma && scc_.same(u, v); };

  std::vector<bool> seen(2 * n, false);
  std::vector<std::pair<std::size_t, Arrival>> todo;

  auto visit = [&](std::size_t v, Arrival arr) {
    if (seen[2 * v + arr]) return false;
    seen[2 * v + arr] = true;
    if (b[v] && !c[v]) return true;
    todo.emplace_back(v, arr);
    return false;
  };

  // Edges leaving v are traversed when allowed by the triple rule at v.
  // `from_start` marks the first node of the walk, which carries no triple.
  auto expand = [&](std::size_t v, bool from_start, Arrival arr) {
    const bool in_c = c[v];
    // Leaving through a tail at v: v -> x.
    for (auto x : g_.children(v)) {
      if (x == v) continue;
      if (!from_start && in_c && !same(v, x)) continue;
      if (visit(x, kViaHead)) return true;
    }
    // Leaving through a head at v: x -> v or x <-> v.
    const bool head_ok = from_start || (in_c ? true : arr == kViaTail);
    if (head_ok) {
      for (auto x : g_.parents(v)) {
        if (x == v) continue;
        // Entering x at a tail: a left chain or fork at x needs v in Sc(x).
        if (c[x] && !same(x, v)) continue;
        if (visit(x, kViaTail)) return true;
      }
      for (auto x : g_.siblings(v))
        if (visit(x, kViaHead)) return true;
    }
    return false;
  };

  for (std::size_t v = 0; v < n; ++v) {
    if (!a[v] || c[v]) continue;
    if (b[v]) return false;
    if (expand(v, true, kViaHead)) return false;
  }
  while (!todo.empty()) {
    const auto [v, arr] = todo.back();
    todo.pop_back();
    if (expand(v, false, arr)) return false;
  }
  return true;
}

bool separated(const Dmg& g, const SeparationQuery& q) {
  if (q.a.empty()) throw Error(ErrorCode::MalformedQuery, "separation query needs a nonempty A", "a");
  if (q.b.empty()) throw Error(ErrorCode::MalformedQuery, "separation query needs a nonempty B", "b");
  if (q.intervention.empty()) return Separator(g).separated(q.a, q.b, q.c, q.notion);
  return Separator(intervene(g, q.intervention)).separated(q.a, q.b, q.c, q.notion);
}

bool sigma_separated(const Dmg& g, const NodeSet& a, const NodeSet& b, const NodeSet& c) {
  return Separator(g).separated(a, b, c, Notion::Sigma);
}

bool d_separated(const Dmg& g, const NodeSet& a, const NodeSet& b, const NodeSet& c) {
  return Separator(g).separated(a, b, c, Notion::D);
}

}  // namespace ioscm
