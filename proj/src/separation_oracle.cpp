#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "ioscm/error.hpp"
#include "ioscm/separation.hpp"

namespace ioscm {

namespace {

enum class Mark { Tail, Head };

struct Step {
  std::size_t from;
  std::size_t to;
  Mark at_from;
  Mark at_to;
};

// Mutual reachability from a Floyd-Warshall style closure.
std::vector<std::vector<bool>> same_component(const Dmg& g, Notion notion) {
  const std::size_t n = g.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (auto c : g.children(i)) reach[i][c] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  std::vector<std::vector<bool>> same(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      same[i][j] = notion == Notion::Sigma ? (reach[i][j] && reach[j][i]) : i == j;
  return same;
}

}  // namespace

OracleResult oracle_separated(const Dmg& g, const SeparationQuery& q, std::size_t max_nodes) {
  if (q.a.empty()) throw Error(ErrorCode::MalformedQuery, "separation query needs a nonempty A", "a");
  if (q.b.empty()) throw Error(ErrorCode::MalformedQuery, "separation query needs a nonempty B", "b");
  if (!q.intervention.empty()) {
    SeparationQuery plain = q;
    plain.intervention.clear();
    return oracle_separated(intervene(g, q.intervention), plain, max_nodes);
  }
  if (g.size() > max_nodes)
    throw Error(ErrorCode::GraphTooLarge,
                "walk search is limited to " + std::to_string(max_nodes) + " nodes, graph has " +
                    std::to_string(g.size()));
  for (const NodeSet* s : {&q.a, &q.b, &q.c})
    for (const auto& v : *s)
      if (g.kind(v) == NodeKind::Latent)
        throw Error(ErrorCode::LatentInQuery, "latent node " + v + " cannot appear in a separation query", v);

  const auto in_a = g.mask(q.a), in_b = g.mask(q.b), in_c = g.mask(q.c);
  const auto sc = same_component(g, q.notion);
  const std::size_t n = g.size();

  std::vector<Step> steps;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : g.children(i)) {
      if (i == j) continue;
      steps.push_back({i, j, Mark::Tail, Mark::Head});
      steps.push_back({j, i, Mark::Head, Mark::Tail});
    }
    for (auto j : g.siblings(i)) steps.push_back({i, j, Mark::Head, Mark::Head});
  }

  // Whether the triple prev *-* mid *-* next is open, given the marks at mid.
  auto triple_open = [&](std::size_t prev, std::size_t mid, std::size_t next, Mark left, Mark right) {
    if (left == Mark::Head && right == Mark::Head) return static_cast<bool>(in_c[mid]);  // collider
    if (!in_c[mid]) return true;
    if (left == Mark::Tail && right == Mark::Head) return static_cast<bool>(sc[mid][prev]);  // left chain
    if (left == Mark::Head && right == Mark::Tail) return static_cast<bool>(sc[mid][next]);  // right chain
    return sc[mid][prev] && sc[mid][next];                                                   // fork
  };

  OracleResult result;
  for (std::size_t v = 0; v < n; ++v)
    if (in_a[v] && in_b[v] && !in_c[v]) {
      result.separated = false;
      result.witness = {g.id(v)};
      return result;
    }

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(steps.size(), kNone);
  std::vector<bool> seen(steps.size(), false);
  std::deque<std::size_t> queue;

  auto finish = [&](std::size_t s) {
    std::vector<NodeId> walk;
    for (std::size_t cur = s; cur != kNone; cur = parent[cur]) walk.push_back(g.id(steps[cur].to));
    std::size_t first = s;
    while (parent[first] != kNone) first = parent[first];
    walk.push_back(g.id(steps[first].from));
    std::reverse(walk.begin(), walk.end());
    result.separated = false;
    result.witness = std::move(walk);
  };

  for (std::size_t s = 0; s < steps.size(); ++s) {
    if (!in_a[steps[s].from] || in_c[steps[s].from]) continue;
    seen[s] = true;
    if (in_b[steps[s].to] && !in_c[steps[s].to]) {
      finish(s);
      return result;
    }
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    const Step& last = steps[s];
    for (std::size_t t = 0; t < steps.size(); ++t) {
      const Step& next = steps[t];
      if (seen[t] || next.from != last.to) continue;
      if (!triple_open(last.from, last.to, next.to, last.at_to, next.at_from)) continue;
      seen[t] = true;
      parent[t] = s;
      if (in_b[next.to] && !in_c[next.to]) {
        finish(t);
        return result;
      }
      queue.push_back(t);
    }
  }
  return result;
}

}  // namespace ioscm
