#pragma once

#include <string>

#include "json.hpp"

#include "ioscm/dmg.hpp"

namespace ioscm {

inline constexpr const char* kGraphFormatVersion = "1";

// {"nodes":[{"id":..,"kind":..}],"directed":[[a,b]],"bidirected":[[a,b]]},
// every list sorted.
nlohmann::json graph_to_json(const Dmg& g);
// Throws Error(InvalidGraph) naming the offending field on malformed input.
Dmg graph_from_json(const nlohmann::json& j);

Dmg load_graph(const std::string& path);

// FNV-1a over the canonical serialization, as 16 hex digits.
std::string graph_hash(const Dmg& g);

}  // namespace ioscm
