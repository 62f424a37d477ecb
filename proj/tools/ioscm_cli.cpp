#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ioscm/adjustment.hpp"
#include "ioscm/calculus.hpp"
#include "ioscm/discrete_scm.hpp"
#include "ioscm/error.hpp"
#include "ioscm/graph_json.hpp"
#include "ioscm/graph_ops.hpp"
#include "ioscm/identify.hpp"
#include "ioscm/linear_scm.hpp"
#include "ioscm/model_json.hpp"
#include "ioscm/separation.hpp"

using json = nlohmann::json;
using namespace ioscm;

namespace {

constexpr const char* kVersion = "0.1.0";

// Raised for problems with the command line itself.
struct UsageError {
  std::string message;
  std::string field;
};

json provenance(const Dmg& g) { return {{"graph_hash", graph_hash(g)}, {"version", kVersion}}; }

void emit(json body, const std::string& status, const Dmg& g) {
  body["status"] = status;
  body["provenance"] = provenance(g);
  std::cout << body.dump() << '\n';
}

void emit_error(const std::string& code, const std::string& message, const std::string& field) {
  json body{{"status", "error"}, {"error", {{"code", code}, {"message", message}, {"field", field}}}};
  body["provenance"] = {{"version", kVersion}};
  std::cout << body.dump() << '\n';
  std::cerr << "error: " << message << '\n';
}

NodeSet as_set(const std::vector<std::string>& v) {
  NodeSet out;
  for (const auto& x : v)
    if (!x.empty()) out.insert(x);
  return out;
}

json set_json(const NodeSet& s) { return json(std::vector<NodeId>(s.begin(), s.end())); }

json query_json(const SeparationQuery& q) {
  return {{"a", set_json(q.a)}, {"b", set_json(q.b)}, {"c", set_json(q.c)}, {"notion", std::string(to_string(q.notion))}};
}

// Parses "name=value" pairs.
template <typename T>
std::map<NodeId, T> parse_values(const std::vector<std::string>& items, const std::string& flag) {
  std::map<NodeId, T> out;
  for (const auto& item : items) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError{"expected name=value in " + flag + ", got '" + item + "'", flag};
    const std::string value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      if constexpr (std::is_same_v<T, int>) {
        out[item.substr(0, eq)] = std::stoi(value, &used);
      } else {
        out[item.substr(0, eq)] = std::stod(value, &used);
      }
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw UsageError{"value of " + item.substr(0, eq) + " in " + flag + " is not a number", flag};
    }
  }
  return out;
}

json read_json(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw UsageError{"cannot open " + path, field};
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError{path + " is not valid JSON: " + e.what(), field};
  }
}

NodeSet role(const json& roles, const char* name) {
  if (!roles.contains(name)) return {};
  const auto& v = roles.at(name);
  if (!v.is_array()) throw UsageError{std::string("role '") + name + "' must be a list of node ids", name};
  NodeSet out;
  for (const auto& x : v) {
    if (!x.is_string()) throw UsageError{std::string("role '") + name + "' must be a list of node ids", name};
    out.insert(x.get<std::string>());
  }
  return out;
}

json verdict_json(const AdjustmentVerdict& v) {
  json conditions = json::array();
  for (const auto& c : v.conditions) {
    json q = query_json(c.query);
    conditions.push_back({{"label", c.label}, {"graph", c.graph}, {"query", q}, {"holds", c.holds}});
  }
  json out{{"applicable", v.applicable}, {"conditions", conditions}};
  if (v.formula) {
    out["formula"] = v.formula->text;
    out["expanded"] = v.formula->expanded;
    out["variant"] = std::string(to_string(v.formula->variant));
  } else {
    out["formula"] = nullptr;
  }
  return out;
}

json factor_json(const Factor& f) {
  return {{"vars", f.vars()}, {"cards", f.cards()}, {"values", f.values()}};
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

struct Options {
  std::string graph_path;
  std::string model_path;
  std::string roles_path;
  std::string notion = "sigma";
  std::vector<std::string> a, b, c, x, y, z, w, act, nodes, inputs;
  int rule = 1;
  bool witness = false;
  bool condition_on_inputs = false;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t max_nodes = 8;
};

int run_sep(const Options& o) {
  const Dmg g = load_graph(o.graph_path);
  SeparationQuery q{as_set(o.a), as_set(o.b), as_set(o.c), parse_notion(o.notion), as_set(o.act)};
  const bool sep = separated(g, q);
  json body{{"separated", sep}, {"query", query_json(q)}, {"witness_walk", nullptr}};
  if (o.witness) {
    const OracleResult oracle = oracle_separated(g, q, o.max_nodes);
    if (oracle.separated != sep) throw std::logic_error("reachability and walk search disagree");
    if (!sep) body["witness_walk"] = oracle.witness;
  }
  emit(body, "ok", g);
  return 0;
}

int run_graph_op(const std::string& op, const Options& o) {
  const Dmg g = load_graph(o.graph_path);
  Dmg out;
  if (op == "marginalize") {
    out = o.nodes.empty() ? induced_dmg(g) : marginalize(g, as_set(o.nodes));
  } else if (op == "acyclify") {
    out = acyclify(g);
  } else if (op == "extend") {
    out = extend(g);
  } else {
    out = twin_graph(g, as_set(o.w));
  }
  emit({{"graph", graph_to_json(out)}, {"graph_hash_out", graph_hash(out)}}, "ok", g);
  return 0;
}

int run_calculus(const Options& o) {
  const Dmg g = load_graph(o.graph_path);
  if (o.rule < 1 || o.rule > 3) throw UsageError{"--rule must be 1, 2 or 3", "rule"};
  RuleQuery q{static_cast<Rule>(o.rule), as_set(o.x), as_set(o.y), as_set(o.z), as_set(o.w), o.condition_on_inputs};
  const RuleVerdict v = check_rule(g, q);
  json body{{"applicable", v.applicable},
            {"rule", o.rule},
            {"separation", query_json(v.separation_checked)},
            {"graph_used", graph_to_json(v.graph_used)}};
  body["conclusion"] = v.applicable ? json(v.conclusion) : json(nullptr);
  emit(body, "ok", g);
  return 0;
}

int run_adjust(const std::string& mode, const Options& o) {
  const Dmg g = load_graph(o.graph_path);
  const json roles = read_json(o.roles_path, "roles");
  if (!roles.is_object()) throw UsageError{"roles file must hold a JSON object", "roles"};
  const std::string variant = roles.value("variant", std::string("general"));

  if (mode == "find") {
    AdjustmentSearch search{role(roles, "y"), role(roles, "x"), role(roles, "c"), role(roles, "s"), role(roles, "w")};
    if (roles.contains("max_size")) search.max_size = roles.at("max_size").get<std::size_t>();
    search.threads = o.threads;
    json found = json::array();
    for (const auto& a : find_adjustment_sets(g, search)) {
      AdjustmentSpec spec{search.y, search.x, search.c, a.z0, a.zplus, a.l, search.s, search.w};
      const auto v = check_general_adjustment(g, spec);
      found.push_back({{"z0", set_json(a.z0)},
                       {"zplus", set_json(a.zplus)},
                       {"l", set_json(a.l)},
                       {"formula", v.formula ? json(v.formula->text) : json(nullptr)},
                       {"expanded", v.formula ? json(v.formula->expanded) : json(nullptr)}});
    }
    emit({{"assignments", found}}, "ok", g);
    return 0;
  }

  AdjustmentVerdict verdict;
  if (variant == "partial-external") {
    PartialExternalSpec spec{role(roles, "y"),   role(roles, "x"),   role(roles, "s"),  role(roles, "z0a"),
                             role(roles, "z0b"), role(roles, "z1a"), role(roles, "z1b"), role(roles, "z2"),
                             role(roles, "z3"),  role(roles, "l0"),  role(roles, "l1")};
    verdict = check_partial_external(g, spec);
  } else {
    AdjustmentSpec spec{role(roles, "y"),     role(roles, "x"), role(roles, "c"), role(roles, "z0"),
                        role(roles, "zplus"), role(roles, "l"), role(roles, "s"), role(roles, "w")};
    if (variant == "general") {
      verdict = check_general_adjustment(g, spec);
    } else if (variant == "no-external") {
      verdict = check_selection_without_external(g, spec);
    } else {
      SpecialCase which;
      try {
        which = parse_special_case(variant);
      } catch (const Error&) {
        throw UsageError{"unknown adjustment variant '" + variant + "'", "variant"};
      }
      verdict = check_special_case(g, spec, which);
    }
  }
  emit(verdict_json(verdict), "ok", g);
  return 0;
}

int run_id(const Options& o) {
  const Dmg g = load_graph(o.graph_path);
  const IdResult r = identify(g, IdQuery{as_set(o.y), as_set(o.act)});
  json body{{"identifiable", r.identifiable}, {"estimand", to_text(*r.estimand)}, {"tree", to_json(*r.estimand)}};
  emit(body, r.identifiable ? "ok" : "fail-value", g);
  return 0;
}

int run_simulate_linear(const std::string& mode, const LinearScm<double>& base, const Options& o) {
  const auto act = parse_values<double>(o.act, "do");
  const LinearScm<double> m = act.empty() ? base : intervene_scm(base, act);
  const auto given = parse_values<double>(o.inputs, "inputs");
  Eigen::VectorXd xj = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.inputs().size()));
  for (const auto& [j, x] : given) xj(m.input_index(j)) = x;
  for (const auto& j : m.inputs())
    if (!given.count(j) && mode != "joint") throw UsageError{"no value for input " + j, "inputs"};

  json body{{"kind", "linear"}, {"outputs", m.outputs()}, {"inputs", m.inputs()}};
  if (mode == "law") {
    const auto law = observational_law(m, xj);
    body["mean"] = vector_json(law.mean);
    body["cov"] = matrix_json(law.cov);
  } else if (mode == "joint") {
    const auto k = law_kernel(m);
    body["intercept"] = vector_json(k.intercept);
    body["coef"] = matrix_json(k.coef);
    body["cov"] = matrix_json(k.cov);
  } else {
    body["samples"] = matrix_json(sample(m, xj, o.n, o.seed));
  }
  emit(body, "ok", m.graph());
  return 0;
}

int run_simulate_discrete(const std::string& mode, const DiscreteScm& m, const Options& o) {
  const auto act = parse_values<int>(o.act, "do");
  const auto given = parse_values<int>(o.inputs, "inputs");
  json body{{"kind", "discrete"}};
  if (mode == "sample") {
    const DiscreteScm mm = act.empty() ? m : intervene_scm(m, as_set([&] {
      std::vector<std::string> keys;
      for (const auto& [v, x] : act) keys.push_back(v);
      return keys;
    }()));
    Assignment values(given.begin(), given.end());
    for (const auto& [v, x] : act) values[v] = x;
    json rows = json::array();
    for (const auto& s : sample(mm, values, o.n, o.seed)) rows.push_back(s);
    body["samples"] = rows;
  } else {
    const DiscreteJoint joint = act.empty() ? enumerate_joint(m) : interventional_joint(m, Assignment(act.begin(), act.end()));
    if (mode == "joint") {
      body["table"] = factor_json(joint.table);
    } else {
      for (const auto& j : joint.inputs)
        if (!given.count(j)) throw UsageError{"no value for input " + j, "inputs"};
      Assignment fixed;
      for (const auto& [j, x] : given)
        if (joint.inputs.count(j)) fixed[j] = x;
      body["table"] = factor_json(joint.table.reduce(fixed));
    }
  }
  emit(body, "ok", m.graph());
  return 0;
}

int run_simulate(const std::string& mode, const Options& o) {
  const Model model = load_model(o.model_path);
  if (model.is_linear()) return run_simulate_linear(mode, *model.linear, o);
  return run_simulate_discrete(mode, *model.discrete, o);
}

int run_validate(const Options& o) {
  const json j = read_json(o.graph_path, "file");
  if (j.is_object() && j.contains("kind")) {
    const Model model = model_from_json(j);
    json body{{"valid", true}, {"kind", model.is_linear() ? "linear" : "discrete"}};
    if (!model.is_linear()) {
      json violations = json::array();
      for (const auto& v : validate_compatibility(*model.discrete))
        violations.push_back({{"outer", set_json(v.outer)}, {"inner", set_json(v.inner)}, {"witness", v.witness}});
      body["valid"] = violations.empty();
      body["violations"] = violations;
    }
    emit(body, "ok", model.graph());
    return 0;
  }
  const Dmg g = graph_from_json(j);
  emit({{"valid", true}, {"kind", "graph"}, {"nodes", g.size()}}, "ok", g);
  return 0;
}

// Option named at the start of a CLI11 message such as "--notion: tau not in
// {sigma,d}" or "--a is required", without its dashes.
std::string option_in(const std::string& message) {
  if (message.rfind("-", 0) != 0) return "arguments";
  const auto start = message.find_first_not_of('-');
  const auto end = message.find_first_of(": ", start);
  return message.substr(start, end == std::string::npos ? end : end - start);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Queries on causal graphs with cycles, latent confounders and input nodes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion) + " (graph format " + kGraphFormatVersion + ")");
  Options o;
  app.add_option("--threads", o.threads, "Worker threads for searches")->check(CLI::Range(1u, 256u));

  auto sets = [&](CLI::App* cmd, const std::string& name, std::vector<std::string>& target, const std::string& help) {
    cmd->add_option("--" + name, target, help)->delimiter(',');
  };

  auto* sep = app.add_subcommand("sep", "Decide sigma- or d-separation");
  sep->add_option("--notion", o.notion, "sigma or d")->check(CLI::IsMember({"sigma", "d"}));
  sets(sep, "a", o.a, "First node set");
  sets(sep, "b", o.b, "Second node set");
  sets(sep, "c", o.c, "Conditioning set");
  sets(sep, "do", o.act, "Intervene before deciding");
  sep->add_flag("--witness", o.witness, "Report a connecting walk");
  sep->add_option("--max-nodes", o.max_nodes, "Size guard for the walk search");
  sep->add_option("graph", o.graph_path, "Graph file")->required();

  auto* marg = app.add_subcommand("marginalize", "Latent projection");
  sets(marg, "nodes", o.nodes, "Nodes to project away (default: every latent node)");
  marg->add_option("graph", o.graph_path, "Graph file")->required();
  auto* acyc = app.add_subcommand("acyclify", "Acyclification");
  acyc->add_option("graph", o.graph_path, "Graph file")->required();
  auto* ext = app.add_subcommand("extend", "Add intervention indicators");
  ext->add_option("graph", o.graph_path, "Graph file")->required();
  auto* twin = app.add_subcommand("twin", "Twin graph for an intervention");
  sets(twin, "w", o.w, "Intervened nodes");
  twin->add_option("graph", o.graph_path, "Graph file")->required();

  auto* calc = app.add_subcommand("calculus", "Check one rule of the causal calculus");
  calc->add_option("--rule", o.rule, "1, 2 or 3")->required();
  sets(calc, "x", o.x, "X");
  sets(calc, "y", o.y, "Y");
  sets(calc, "z", o.z, "Z");
  sets(calc, "w", o.w, "Held-fixed interventions");
  calc->add_flag("--condition-on-inputs", o.condition_on_inputs, "Also condition on W");
  calc->add_option("graph", o.graph_path, "Graph file")->required();

  auto* adjust = app.add_subcommand("adjust", "Adjustment criteria");
  adjust->require_subcommand(1);
  auto* check = adjust->add_subcommand("check", "Check a role assignment");
  auto* find = adjust->add_subcommand("find", "Search for adjustment sets");
  for (auto* cmd : {check, find}) {
    cmd->add_option("--roles", o.roles_path, "Roles file")->required();
    cmd->add_option("graph", o.graph_path, "Graph file")->required();
  }

  auto* id = app.add_subcommand("id", "Identify an interventional distribution");
  sets(id, "y", o.y, "Target nodes");
  sets(id, "do", o.act, "Intervened nodes");
  id->add_option("graph", o.graph_path, "Graph file")->required();

  auto* sim = app.add_subcommand("simulate", "Evaluate a structural causal model");
  sim->require_subcommand(1);
  std::vector<CLI::App*> sim_modes;
  for (const char* mode : {"law", "sample", "joint"}) {
    auto* cmd = sim->add_subcommand(mode, std::string("Model ") + mode);
    sets(cmd, "inputs", o.inputs, "Input values name=value");
    sets(cmd, "do", o.act, "Interventions name=value");
    cmd->add_option("--n", o.n, "Number of draws")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("model", o.model_path, "Model file")->required();
    sim_modes.push_back(cmd);
  }

  auto* val = app.add_subcommand("validate", "Validate a graph or model file");
  val->add_option("file", o.graph_path, "Graph or model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const std::string message = e.what();
    emit_error("UsageError", message, option_in(message));
    return 2;
  }

  try {
    if (sep->parsed()) return run_sep(o);
    for (auto* cmd : {marg, acyc, ext, twin})
      if (cmd->parsed()) return run_graph_op(cmd->get_name(), o);
    if (calc->parsed()) return run_calculus(o);
    if (check->parsed()) return run_adjust("check", o);
    if (find->parsed()) return run_adjust("find", o);
    if (id->parsed()) return run_id(o);
    for (auto* cmd : sim_modes)
      if (cmd->parsed()) return run_simulate(cmd->get_name(), o);
    if (val->parsed()) return run_validate(o);
  } catch (const Error& e) {
    emit_error(std::string(to_string(e.code())), e.what(), e.field());
    return 2;
  } catch (const UsageError& e) {
    emit_error("UsageError", e.message, e.field);
    return 2;
  } catch (const json::exception& e) {
    emit_error("UsageError", e.what(), "roles");
    return 2;
  } catch (const std::exception& e) {
    emit_error("InternalError", e.what(), "");
    return 3;
  }
  emit_error("UsageError", "no command given", "command");
  return 2;
}
