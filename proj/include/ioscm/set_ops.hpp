#pragma once

#include "ioscm/dmg.hpp"

namespace ioscm {

inline NodeSet unite(NodeSet a, const NodeSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

inline NodeSet minus(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  for (const auto& v : a)
    if (!b.count(v)) out.insert(v);
  return out;
}

inline NodeSet intersect(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  for (const auto& v : a)
    if (b.count(v)) out.insert(v);
  return out;
}

inline bool disjoint(const NodeSet& a, const NodeSet& b) {
  for (const auto& v : a)
    if (b.count(v)) return false;
  return true;
}

inline bool subset_of(const NodeSet& a, const NodeSet& b) {
  for (const auto& v : a)
    if (!b.count(v)) return false;
  return true;
}

}  // namespace ioscm
