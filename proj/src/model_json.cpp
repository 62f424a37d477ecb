#include "ioscm/model_json.hpp"

#include <algorithm>
#include <fstream>

#include "ioscm/error.hpp"
#include "ioscm/graph_json.hpp"

namespace ioscm {

using json = nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    throw Error(ErrorCode::InvalidModel, std::string("model is missing field '") + name + "'", name);
  return j.at(name);
}

Eigen::MatrixXd matrix(const json& j, const char* name, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw Error(ErrorCode::InvalidModel, std::string(name) + " has the wrong number of rows", name);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorCode::InvalidModel, std::string(name) + " has the wrong number of columns", name);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& x = row[static_cast<std::size_t>(c)];
      if (!x.is_number()) throw Error(ErrorCode::InvalidModel, std::string(name) + " entries must be numbers", name);
      m(r, c) = x.get<double>();
    }
  }
  return m;
}

std::vector<NodeId> names(const json& j, const char* name) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidModel, std::string(name) + " must be a list of ids", name);
  std::vector<NodeId> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw Error(ErrorCode::InvalidModel, std::string(name) + " must be a list of ids", name);
    out.push_back(x.get<std::string>());
  }
  return out;
}

json rows(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

LinearScm<double> linear_from_json(const json& j) {
  const auto outputs = names(field(j, "outputs"), "outputs");
  const auto inputs = j.contains("inputs") ? names(j.at("inputs"), "inputs") : std::vector<NodeId>{};
  const auto n = static_cast<Eigen::Index>(outputs.size());
  const auto k = static_cast<Eigen::Index>(inputs.size());
  const Eigen::MatrixXd b = matrix(field(j, "B"), "B", n, n);
  const Eigen::MatrixXd gamma = k > 0 ? matrix(field(j, "Gamma"), "Gamma", n, k) : Eigen::MatrixXd(n, 0);
  const Eigen::MatrixXd omega = matrix(field(j, "Omega"), "Omega", n, n);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
  if (j.contains("mu")) mu = matrix(json::array({j.at("mu")}), "mu", 1, n).transpose();
  LinearScm<double> m(outputs, inputs, b, gamma, omega, mu);
  if (j.contains("graph")) m.check_graph(graph_from_json(j.at("graph")));
  return m;
}

DiscreteScm discrete_from_json(const json& j) {
  const Dmg g = graph_from_json(field(j, "graph"));
  std::map<NodeId, int> cards;
  const auto& domains = field(j, "domains");
  if (!domains.is_object()) throw Error(ErrorCode::InvalidModel, "domains must map node ids to sizes", "domains");
  for (const auto& [v, c] : domains.items()) {
    if (!c.is_number_integer()) throw Error(ErrorCode::InvalidModel, "domain size of " + v + " must be an integer", v);
    cards[v] = c.get<int>();
  }
  for (const auto& v : g.ids())
    if (!cards.count(v)) throw Error(ErrorCode::InvalidModel, "no domain size for " + v, v);

  std::map<NodeId, std::vector<double>> noise;
  if (j.contains("noise")) {
    const auto& nj = j.at("noise");
    if (!nj.is_object()) throw Error(ErrorCode::InvalidModel, "noise must map latent ids to distributions", "noise");
    for (const auto& [u, p] : nj.items()) {
      if (!p.is_array()) throw Error(ErrorCode::InvalidModel, "distribution of " + u + " must be a list", u);
      for (const auto& x : p)
        if (!x.is_number()) throw Error(ErrorCode::InvalidModel, "distribution of " + u + " must be numeric", u);
      noise[u] = p.get<std::vector<double>>();
    }
  }

  std::vector<LoopMechanism> mechanisms;
  const auto& mj = field(j, "mechanisms");
  if (!mj.is_array()) throw Error(ErrorCode::InvalidModel, "mechanisms must be a list", "mechanisms");
  for (const auto& entry : mj) {
    LoopMechanism mech;
    auto members = names(field(entry, "loop"), "loop");
    std::sort(members.begin(), members.end());
    for (const auto& v : members)
      if (!cards.count(v)) throw Error(ErrorCode::UnknownNode, "mechanism names unknown node " + v, v);
    mech.members = members;
    if (entry.contains("parents")) {
      mech.parents = names(entry.at("parents"), "parents");
      if (!std::is_sorted(mech.parents.begin(), mech.parents.end()))
        throw Error(ErrorCode::InvalidModel, "mechanism parents must be sorted", "parents");
    }
    const auto& table = field(entry, "table");
    if (!table.is_array()) throw Error(ErrorCode::InvalidModel, "mechanism table must be a list", "table");
    Assignment values;
    for (const auto& row : table) {
      const json cells = row.is_array() ? row : json::array({row});
      if (cells.size() != members.size())
        throw Error(ErrorCode::InvalidModel, "table rows must list one value per loop member", "table");
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (!cells[i].is_number_integer()) throw Error(ErrorCode::InvalidModel, "table values must be integers", "table");
        const int x = cells[i].get<int>();
        if (x < 0 || x >= cards.at(members[i]))
          throw Error(ErrorCode::InvalidModel, "table value out of range for " + members[i], members[i]);
        values[members[i]] = x;
      }
      mech.table.push_back(encode(members, cards, values));
    }
    mechanisms.push_back(std::move(mech));
  }
  return DiscreteScm(g, std::move(cards), std::move(noise), std::move(mechanisms));
}

}  // namespace

Model model_from_json(const json& j) {
  const auto& kind = field(j, "kind");
  if (kind == "linear") return Model{linear_from_json(j), std::nullopt};
  if (kind == "discrete") return Model{std::nullopt, discrete_from_json(j)};
  throw Error(ErrorCode::InvalidModel, "model kind must be 'linear' or 'discrete'", "kind");
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidModel, "cannot open model file " + path, "model");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidModel, std::string("model file is not valid JSON: ") + e.what(), "model");
  }
  return model_from_json(j);
}

json model_to_json(const LinearScm<double>& m) {
  json j;
  j["kind"] = "linear";
  j["outputs"] = m.outputs();
  j["inputs"] = m.inputs();
  j["B"] = rows(m.b());
  j["Gamma"] = rows(m.gamma());
  j["Omega"] = rows(m.omega());
  j["mu"] = rows(m.mu().transpose())[0];
  return j;
}

json model_to_json(const DiscreteScm& m) {
  json j;
  j["kind"] = "discrete";
  j["graph"] = graph_to_json(m.graph());
  j["domains"] = m.cards();
  j["noise"] = m.noise();
  json mechs = json::array();
  for (const auto& [loop, mech] : m.mechanisms()) {
    json table = json::array();
    Assignment values;
    for (auto code : mech.table) {
      decode(code, mech.members, m.cards(), values);
      json row = json::array();
      for (const auto& v : mech.members) row.push_back(values.at(v));
      table.push_back(std::move(row));
    }
    mechs.push_back({{"loop", mech.members}, {"parents", mech.parents}, {"table", std::move(table)}});
  }
  j["mechanisms"] = std::move(mechs);
  return j;
}

}  // namespace ioscm
