#include "ioscm/graph_json.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

#include "ioscm/error.hpp"

namespace ioscm {

using nlohmann::json;

json graph_to_json(const Dmg& g) {
  json nodes = json::array();
  for (const auto& [id, kind] : g.node_list()) nodes.push_back({{"id", id}, {"kind", to_string(kind)}});
  json directed = json::array();
  for (const auto& [a, b] : g.directed_edges()) directed.push_back({a, b});
  json bidirected = json::array();
  for (const auto& [a, b] : g.bidirected_edges()) bidirected.push_back({a, b});
  return {{"nodes", nodes}, {"directed", directed}, {"bidirected", bidirected}};
}

namespace {

EdgeList read_edges(const json& j, const char* field) {
  EdgeList out;
  if (!j.contains(field)) return out;
  const auto& list = j.at(field);
  if (!list.is_array()) throw Error(ErrorCode::InvalidGraph, std::string(field) + " must be an array", field);
  for (const auto& e : list) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw Error(ErrorCode::InvalidGraph, std::string(field) + " entries must be pairs of node ids", field);
    out.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return out;
}

}  // namespace

Dmg graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.at("nodes").is_array())
    throw Error(ErrorCode::InvalidGraph, "graph must be an object with a nodes array", "nodes");
  std::vector<std::pair<NodeId, NodeKind>> nodes;
  for (const auto& n : j.at("nodes")) {
    if (!n.is_object() || !n.contains("id") || !n.at("id").is_string())
      throw Error(ErrorCode::InvalidGraph, "each node needs a string id", "nodes");
    NodeKind kind = NodeKind::Output;
    if (n.contains("kind")) {
      if (!n.at("kind").is_string()) throw Error(ErrorCode::InvalidGraph, "node kind must be a string", "kind");
      kind = parse_node_kind(n.at("kind").get<std::string>());
    }
    nodes.emplace_back(n.at("id").get<std::string>(), kind);
  }
  return Dmg(std::move(nodes), read_edges(j, "directed"), read_edges(j, "bidirected"));
}

Dmg load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidGraph, "cannot open graph file " + path, "graph");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidGraph, std::string("graph file is not valid JSON: ") + e.what(), "graph");
  }
  return graph_from_json(j);
}

std::string graph_hash(const Dmg& g) {
  const std::string text = graph_to_json(g).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ioscm
