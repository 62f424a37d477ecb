#include "ioscm/adjustment.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <thread>
#include <utility>

#include "ioscm/error.hpp"
#include "ioscm/graph_ops.hpp"
#include "ioscm/set_ops.hpp"

namespace ioscm {

std::string_view to_string(AdjustmentVariant v) {
  switch (v) {
    case AdjustmentVariant::General: return "general";
    case AdjustmentVariant::NoExternalData: return "no-external-data";
    case AdjustmentVariant::PartialExternalData: return "partial-external-data";
  }
  return "general";
}

std::string_view to_string(SpecialCase c) {
  switch (c) {
    case SpecialCase::Backdoor: return "backdoor";
    case SpecialCase::ExtendedBackdoor: return "extended-backdoor";
    case SpecialCase::SelectionBackdoor: return "selection-backdoor";
    case SpecialCase::GeneralSelectionBackdoor: return "general-selection-backdoor";
  }
  return "backdoor";
}

SpecialCase parse_special_case(std::string_view text) {
  for (auto c : {SpecialCase::Backdoor, SpecialCase::ExtendedBackdoor, SpecialCase::SelectionBackdoor,
                 SpecialCase::GeneralSelectionBackdoor})
    if (to_string(c) == text) return c;
  throw Error(ErrorCode::MalformedSpec, "unknown special case '" + std::string(text) + "'", "case");
}

namespace {

using Role = std::pair<const char*, const NodeSet*>;

void validate_roles(const Dmg& g, const std::vector<Role>& roles) {
  for (std::size_t i = 0; i < roles.size(); ++i) {
    const auto& [name, set] = roles[i];
    const std::string role(name);
    for (const auto& v : *set) {
      if (!g.contains(v)) throw Error(ErrorCode::UnknownNode, "unknown node '" + v + "' in role " + role, role);
      const NodeKind kind = g.kind(v);
      const bool latent_ok = role == "l" || role == "l0" || role == "l1";
      const bool input_ok = role == "w";
      if (kind == NodeKind::Latent && !latent_ok)
        throw Error(ErrorCode::MalformedSpec, "role " + role + " cannot hold latent node " + v, role);
      if (kind == NodeKind::Input && !input_ok)
        throw Error(ErrorCode::MalformedSpec, "role " + role + " cannot hold input node " + v, role);
    }
    for (std::size_t j = 0; j < i; ++j)
      if (!disjoint(*set, *roles[j].second))
        throw Error(ErrorCode::MalformedSpec,
                    "roles " + std::string(roles[j].first) + " and " + role + " overlap", role);
  }
}

void require_nonempty(const NodeSet& s, const char* role) {
  if (s.empty()) throw Error(ErrorCode::MalformedSpec, std::string("role ") + role + " must be nonempty", role);
}

// Separation queries on the extended graph of g after do(W), and lazily on
// the one after do(W ∪ X).
class Checker {
 public:
  Checker(const Dmg& g, const NodeSet& w_out, const NodeSet& x)
      : base_(g), w_out_(w_out), x_(x), ext_(extend(intervene(g, w_out))) {}

  ConditionResult check(std::string label, const NodeSet& a, const NodeSet& b, const NodeSet& c) {
    return run(std::move(label), "extended", ext_, a, b, c);
  }

  // Statements under do(X): X is held at its value, so it joins the
  // conditioning set.
  ConditionResult check_do_x(std::string label, const NodeSet& a, const NodeSet& b, const NodeSet& c) {
    if (!ext_do_x_) ext_do_x_.emplace(extend(intervene(base_, unite(w_out_, x_))));
    return run(std::move(label), "extended_do_x", *ext_do_x_, a, b, unite(c, x_));
  }

 private:
  static ConditionResult run(std::string label, const char* graph, const Separator& sep, const NodeSet& a,
                             const NodeSet& b, const NodeSet& c) {
    ConditionResult r;
    r.label = std::move(label);
    r.graph = graph;
    r.query.a = a;
    r.query.b = b;
    r.query.c = c;
    const Dmg& g = sep.graph();
    r.holds = sep.separated(g.mask(a), g.mask(b), g.mask(c), Notion::Sigma);
    return r;
  }

  const Dmg& base_;
  NodeSet w_out_;
  NodeSet x_;
  Separator ext_;
  std::optional<Separator> ext_do_x_;
};

NodeSet indicators(const NodeSet& x) {
  NodeSet out;
  for (const auto& v : x) out.insert(indicator_name(v));
  return out;
}

std::string kernel(const std::string& target, std::initializer_list<std::string> given) {
  std::string rest;
  for (const auto& part : given) {
    if (part.empty()) continue;
    if (!rest.empty()) rest += ",";
    rest += part;
  }
  return "P(" + target + (rest.empty() ? "" : "|" + rest) + ")";
}

std::string do_part(const std::string& w) { return w.empty() ? "" : "do(" + w + ")"; }
std::string sel_part(const std::string& s) { return s.empty() ? "" : s + "=s"; }

struct RoleNames {
  std::string y, x, z, c, s, w;
};

void fill_general(AdjustmentFormula& f, const RoleNames& sym, const RoleNames& ids) {
  auto build = [](const RoleNames& n, std::string* target, std::string* integrand, std::string* mixing) {
    *target = kernel(n.y, {n.c, do_part(n.x), do_part(n.w)});
    *integrand = kernel(n.y, {n.x, n.z, n.c, sel_part(n.s), do_part(n.w)});
    *mixing = n.z.empty() ? "" : kernel(n.z, {n.c, do_part(n.w)});
    return n.z.empty() ? *integrand : "∫ " + *integrand + " d" + *mixing;
  };
  f.text = build(sym, &f.target, &f.integrand, &f.mixing);
  std::string t, i, m;
  f.expanded = build(ids, &t, &i, &m);
}

NodeSet outputs_of(const Dmg& g, const NodeSet& w) {
  NodeSet out;
  for (const auto& v : w)
    if (g.kind(v) == NodeKind::Output) out.insert(v);
  return out;
}

AdjustmentVerdict finish(std::vector<ConditionResult> conditions) {
  AdjustmentVerdict v;
  v.conditions = std::move(conditions);
  v.applicable = std::all_of(v.conditions.begin(), v.conditions.end(), [](const auto& c) { return c.holds; });
  return v;
}

AdjustmentVerdict general_unchecked(const Dmg& g, const AdjustmentSpec& spec) {
  const NodeSet w = unite(spec.w, g.inputs());
  const NodeSet z = unite(spec.z0, spec.zplus);
  Checker chk(g, outputs_of(g, w), spec.x);
  const NodeSet ix = indicators(spec.x);
  std::vector<ConditionResult> conds;
  conds.push_back(chk.check("(Z0,L) ⫫ I_X | C", unite(spec.z0, spec.l), ix, spec.c));
  conds.push_back(chk.check("Y ⫫ (I_X,Z+) | C,X,Z0,L", spec.y, unite(ix, spec.zplus),
                            unite(unite(spec.c, spec.x), unite(spec.z0, spec.l))));
  conds.push_back(chk.check("Y ⫫ S | C,X,Z", spec.y, spec.s, unite(unite(spec.c, spec.x), z)));
  conds.push_back(chk.check("L ⫫ X | C,Z", spec.l, spec.x, unite(spec.c, z)));
  AdjustmentVerdict verdict = finish(std::move(conds));
  if (verdict.applicable) {
    AdjustmentFormula f;
    f.variant = AdjustmentVariant::General;
    const RoleNames sym{"Y", "X", z.empty() ? "" : "Z", spec.c.empty() ? "" : "C", spec.s.empty() ? "" : "S",
                        w.empty() ? "" : "W"};
    const RoleNames ids{join(spec.y), join(spec.x), join(z), join(spec.c), join(spec.s), join(w)};
    fill_general(f, sym, ids);
    verdict.formula = f;
  }
  return verdict;
}

void validate_general(const Dmg& g, const AdjustmentSpec& spec) {
  validate_roles(g, {{"y", &spec.y},
                     {"x", &spec.x},
                     {"c", &spec.c},
                     {"z0", &spec.z0},
                     {"zplus", &spec.zplus},
                     {"l", &spec.l},
                     {"s", &spec.s},
                     {"w", &spec.w}});
  require_nonempty(spec.y, "y");
  require_nonempty(spec.x, "x");
}

}  // namespace

AdjustmentVerdict check_general_adjustment(const Dmg& g, const AdjustmentSpec& spec) {
  validate_general(g, spec);
  return general_unchecked(g, spec);
}

AdjustmentVerdict check_special_case(const Dmg& g, const AdjustmentSpec& spec, SpecialCase which) {
  validate_general(g, spec);
  auto forbid = [&](const NodeSet& s, const char* role) {
    if (!s.empty())
      throw Error(ErrorCode::CaseMismatch,
                  std::string("role ") + role + " must be empty for " + std::string(to_string(which)), role);
  };
  forbid(minus(spec.w, g.inputs()), "w");
  forbid(spec.c, "c");
  switch (which) {
    case SpecialCase::Backdoor:
      forbid(spec.s, "s");
      forbid(spec.l, "l");
      forbid(spec.zplus, "zplus");
      break;
    case SpecialCase::ExtendedBackdoor:
      forbid(spec.s, "s");
      break;
    case SpecialCase::SelectionBackdoor: {
      forbid(spec.l, "l");
      // Stated directly with S folded into the second condition.
      Checker chk(g, {}, spec.x);
      const NodeSet ix = indicators(spec.x);
      std::vector<ConditionResult> conds;
      conds.push_back(chk.check("Z0 ⫫ I_X", spec.z0, ix, {}));
      conds.push_back(
          chk.check("Y ⫫ (I_X,Z+,S) | X,Z0", spec.y, unite(unite(ix, spec.zplus), spec.s), unite(spec.x, spec.z0)));
      AdjustmentVerdict verdict = finish(std::move(conds));
      if (verdict.applicable) {
        // The formula coincides with the general one for these roles.
        AdjustmentSpec copy = spec;
        copy.w = g.inputs();
        const NodeSet z = unite(spec.z0, spec.zplus);
        AdjustmentFormula f;
        const RoleNames sym{"Y", "X", z.empty() ? "" : "Z", "", spec.s.empty() ? "" : "S",
                            copy.w.empty() ? "" : "W"};
        const RoleNames ids{join(spec.y), join(spec.x), join(z), "", join(spec.s), join(copy.w)};
        fill_general(f, sym, ids);
        verdict.formula = f;
      }
      return verdict;
    }
    case SpecialCase::GeneralSelectionBackdoor:
      break;
  }
  return general_unchecked(g, spec);
}

AdjustmentVerdict check_selection_without_external(const Dmg& g, const AdjustmentSpec& spec) {
  validate_general(g, spec);
  require_nonempty(spec.s, "s");
  auto forbid = [&](const NodeSet& s, const char* role) {
    if (!s.empty())
      throw Error(ErrorCode::MalformedSpec, std::string("role ") + role + " is not used without external data", role);
  };
  forbid(spec.c, "c");
  forbid(spec.l, "l");
  forbid(minus(spec.w, g.inputs()), "w");

  const NodeSet z = unite(spec.z0, spec.zplus);
  const NodeSet ix = indicators(spec.x);
  Checker chk(g, {}, spec.x);
  std::vector<ConditionResult> conds;
  conds.push_back(chk.check_do_x("Y ⫫ S | do(X)", spec.y, spec.s, {}));
  conds.push_back(chk.check("Z0 ⫫ I_X | S", spec.z0, ix, spec.s));
  conds.push_back(chk.check_do_x("Y ⫫ Z+ | Z0,S,do(X)", spec.y, spec.zplus, unite(spec.z0, spec.s)));
  conds.push_back(chk.check("Y ⫫ I_X | X,Z,S", spec.y, ix, unite(unite(spec.x, z), spec.s)));
  AdjustmentVerdict verdict = finish(std::move(conds));
  if (verdict.applicable) {
    AdjustmentFormula f;
    f.variant = AdjustmentVariant::NoExternalData;
    auto build = [&](const std::string& y, const std::string& x, const std::string& zs, const std::string& s,
                     bool fill) {
      const std::string integrand = kernel(y, {x, zs, sel_part(s)});
      const std::string mixing = zs.empty() ? "" : kernel(zs, {sel_part(s)});
      if (fill) {
        f.target = kernel(y, {do_part(x)});
        f.integrand = integrand;
        f.mixing = mixing;
      }
      return zs.empty() ? integrand : "∫ " + integrand + " d" + mixing;
    };
    f.text = build("Y", "X", z.empty() ? "" : "Z", "S", true);
    f.expanded = build(join(spec.y), join(spec.x), join(z), join(spec.s), false);
    verdict.formula = f;
  }
  return verdict;
}

AdjustmentVerdict check_partial_external(const Dmg& g, const PartialExternalSpec& spec) {
  validate_roles(g, {{"y", &spec.y},
                     {"x", &spec.x},
                     {"s", &spec.s},
                     {"z0a", &spec.z0a},
                     {"z0b", &spec.z0b},
                     {"z1a", &spec.z1a},
                     {"z1b", &spec.z1b},
                     {"z2", &spec.z2},
                     {"z3", &spec.z3},
                     {"l0", &spec.l0},
                     {"l1", &spec.l1}});
  require_nonempty(spec.y, "y");
  require_nonempty(spec.x, "x");

  const NodeSet z0 = unite(spec.z0a, spec.z0b);
  const NodeSet z1 = unite(spec.z1a, spec.z1b);
  const NodeSet z_le1 = unite(z0, z1);
  const NodeSet z_le1a = unite(spec.z0a, spec.z1a);
  const NodeSet z_le1b = unite(spec.z0b, spec.z1b);
  const NodeSet z_le2 = unite(z_le1, spec.z2);
  const NodeSet z = unite(z_le2, spec.z3);
  const NodeSet ix = indicators(spec.x);

  Checker chk(g, {}, spec.x);
  std::vector<ConditionResult> conds;
  conds.push_back(chk.check("(L0,Z0) ⫫ I_X", unite(spec.l0, z0), ix, {}));
  conds.push_back(chk.check_do_x("Y ⫫ Z1 | L0,Z0,do(X)", spec.y, z1, unite(spec.l0, z0)));
  conds.push_back(chk.check("Z≤1A ⫫ S | Z≤1B", z_le1a, spec.s, z_le1b));
  conds.push_back(chk.check("L0 ⫫ I_X | Z≤1", spec.l0, ix, z_le1));
  conds.push_back(chk.check_do_x("Y ⫫ S | Z≤1,do(X)", spec.y, spec.s, z_le1));
  conds.push_back(chk.check("(L1,Z2) ⫫ I_X | S,Z≤1", unite(spec.l1, spec.z2), ix, unite(spec.s, z_le1)));
  conds.push_back(
      chk.check_do_x("Y ⫫ Z3 | L1,S,Z≤2,do(X)", spec.y, spec.z3, unite(unite(spec.l1, spec.s), z_le2)));
  conds.push_back(chk.check("L1 ⫫ I_X | S,Z", spec.l1, ix, unite(spec.s, z)));
  conds.push_back(chk.check("Y ⫫ I_X | X,S,Z", spec.y, ix, unite(unite(spec.x, spec.s), z)));
  AdjustmentVerdict verdict = finish(std::move(conds));
  if (verdict.applicable) {
    AdjustmentFormula f;
    f.variant = AdjustmentVariant::PartialExternalData;
    const NodeSet z_rest = minus(z, z_le1b);
    auto build = [&](const std::string& y, const std::string& x, const std::string& s, const std::string& zs,
                     const std::string& rest, const std::string& ext, bool fill) {
      const std::string integrand = kernel(y, {sel_part(s), zs, x});
      std::string mixing;
      std::string integrals;
      if (!rest.empty()) {
        mixing += "d" + kernel(rest, {sel_part(s), ext});
        integrals += "∫";
      }
      if (!ext.empty()) {
        mixing += std::string(mixing.empty() ? "" : " ") + "d" + kernel(ext, {});
        integrals += "∫";
      }
      if (fill) {
        f.target = kernel(y, {do_part(x)});
        f.integrand = integrand;
        f.mixing = mixing;
      }
      return integrals.empty() ? integrand : integrals + " " + integrand + " " + mixing;
    };
    f.text = build("Y", "X", spec.s.empty() ? "" : "S", z.empty() ? "" : "Z",
                   z_rest.empty() ? "" : (z_le1b.empty() ? "Z" : "Z∖Z≤1B"), z_le1b.empty() ? "" : "Z≤1B", true);
    f.expanded = build(join(spec.y), join(spec.x), join(spec.s), join(z), join(z_rest), join(z_le1b), false);
    verdict.formula = f;
  }
  return verdict;
}

std::vector<AdjustmentAssignment> find_adjustment_sets(const Dmg& g, const AdjustmentSearch& search) {
  AdjustmentSpec fixed;
  fixed.y = search.y;
  fixed.x = search.x;
  fixed.c = search.c;
  fixed.s = search.s;
  fixed.w = search.w;
  validate_general(g, fixed);

  const NodeSet taken = unite(unite(unite(search.y, search.x), unite(search.c, search.s)), search.w);
  std::vector<NodeId> pool;
  for (const auto& v : g.outputs())
    if (!taken.count(v)) pool.push_back(v);
  if (pool.size() > 16)
    throw Error(ErrorCode::PoolTooLarge,
                "candidate pool has " + std::to_string(pool.size()) + " nodes, the limit is 16", "pool");
  const std::size_t k = pool.size();

  // Candidate Z sets ordered by size, then lexicographically.
  std::vector<std::uint32_t> z_masks;
  for (std::uint32_t m = 0; m < (1u << k); ++m)
    if (static_cast<std::size_t>(__builtin_popcount(m)) <= search.max_size) z_masks.push_back(m);
  auto names = [&](std::uint32_t m) {
    NodeSet s;
    for (std::size_t i = 0; i < k; ++i)
      if (m >> i & 1u) s.insert(pool[i]);
    return s;
  };
  std::stable_sort(z_masks.begin(), z_masks.end(), [&](std::uint32_t a, std::uint32_t b) {
    const int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    if (pa != pb) return pa < pb;
    return names(a) < names(b);
  });

  // For one Z: try splits into (z0, zplus) and L ⊆ pool \ Z, smallest L and
  // largest z0 first.
  auto solve = [&](std::uint32_t zm) -> std::optional<AdjustmentAssignment> {
    const std::size_t zs = __builtin_popcount(zm);
    const std::uint32_t rest = ((1u << k) - 1) & ~zm;
    std::vector<std::uint32_t> l_masks;
    for (std::uint32_t l = rest;; l = (l - 1) & rest) {
      if (zs + __builtin_popcount(l) <= search.max_size) l_masks.push_back(l);
      if (l == 0) break;
    }
    std::stable_sort(l_masks.begin(), l_masks.end(), [&](std::uint32_t a, std::uint32_t b) {
      const int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
      if (pa != pb) return pa < pb;
      return names(a) < names(b);
    });
    std::vector<std::uint32_t> splits;
    for (std::uint32_t p = zm;; p = (p - 1) & zm) {
      splits.push_back(p);
      if (p == 0) break;
    }
    std::stable_sort(splits.begin(), splits.end(), [&](std::uint32_t a, std::uint32_t b) {
      const int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
      if (pa != pb) return pa > pb;
      return names(a) < names(b);
    });
    for (auto l : l_masks)
      for (auto z0 : splits) {
        AdjustmentSpec spec = fixed;
        spec.z0 = names(z0);
        spec.zplus = names(zm & ~z0);
        spec.l = names(l);
        if (general_unchecked(g, spec).applicable) return AdjustmentAssignment{spec.z0, spec.zplus, spec.l};
      }
    return std::nullopt;
  };

  std::vector<std::optional<AdjustmentAssignment>> found(z_masks.size());
  const unsigned threads = std::max(1u, search.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < z_masks.size(); ++i) found[i] = solve(z_masks[i]);
  } else {
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t)
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < z_masks.size(); i += threads) found[i] = solve(z_masks[i]);
      });
    for (auto& w : workers) w.join();
  }
  std::vector<AdjustmentAssignment> out;
  for (auto& f : found)
    if (f) out.push_back(std::move(*f));
  return out;
}

}  // namespace ioscm
