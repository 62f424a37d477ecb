#include "ioscm/estimand.hpp"

#include "ioscm/error.hpp"
#include "ioscm/set_ops.hpp"

namespace ioscm {

std::string_view to_string(EstimandKind kind) {
  switch (kind) {
    case EstimandKind::Kernel: return "kernel";
    case EstimandKind::Conditional: return "conditional";
    case EstimandKind::Marginal: return "marginal";
    case EstimandKind::Product: return "product";
    case EstimandKind::Fail: return "fail";
  }
  return "fail";
}

EstimandPtr Estimand::kernel(NodeSet target, NodeSet given, NodeSet intervened) {
  auto e = std::make_shared<Estimand>();
  e->kind = EstimandKind::Kernel;
  e->target = std::move(target);
  e->given = std::move(given);
  e->intervened = std::move(intervened);
  return e;
}

EstimandPtr Estimand::conditional(EstimandPtr child, NodeSet target, NodeSet given) {
  auto e = std::make_shared<Estimand>();
  e->kind = EstimandKind::Conditional;
  e->target = std::move(target);
  e->given = std::move(given);
  e->children = {std::move(child)};
  return e;
}

EstimandPtr Estimand::marginal(EstimandPtr child, NodeSet over) {
  if (over.empty()) return child;
  auto e = std::make_shared<Estimand>();
  e->kind = EstimandKind::Marginal;
  e->over = std::move(over);
  e->children = {std::move(child)};
  return e;
}

EstimandPtr Estimand::product(std::vector<EstimandPtr> factors, std::vector<NodeSet> sccs) {
  auto e = std::make_shared<Estimand>();
  e->kind = EstimandKind::Product;
  sccs.resize(factors.size());
  e->children = std::move(factors);
  e->sccs = std::move(sccs);
  return e;
}

EstimandPtr Estimand::fail() { return std::make_shared<Estimand>(); }

NodeSet Estimand::free_vars() const {
  switch (kind) {
    case EstimandKind::Kernel:
    case EstimandKind::Conditional:
      return target;
    case EstimandKind::Marginal:
      return minus(children.front()->free_vars(), over);
    case EstimandKind::Product: {
      NodeSet out;
      for (const auto& c : children) out = unite(std::move(out), c->free_vars());
      return out;
    }
    case EstimandKind::Fail:
      break;
  }
  return {};
}

namespace {

std::string conditional_body(const NodeSet& target, const NodeSet& given) {
  return join(target) + (given.empty() ? "" : " | " + join(given));
}

}  // namespace

std::string to_text(const Estimand& e) {
  switch (e.kind) {
    case EstimandKind::Kernel: {
      std::string out = "P(" + conditional_body(e.target, e.given);
      if (!e.intervened.empty()) out += " ; do(" + join(e.intervened) + ")";
      return out + ")";
    }
    case EstimandKind::Conditional:
      return "[" + to_text(*e.children.front()) + "](" + conditional_body(e.target, e.given) + ")";
    case EstimandKind::Marginal: {
      const auto& child = *e.children.front();
      const std::string body = to_text(child);
      return "∫_{" + join(e.over) + "} " + (child.kind == EstimandKind::Product ? "(" + body + ")" : body);
    }
    case EstimandKind::Product: {
      std::string out;
      for (const auto& c : e.children) {
        if (!out.empty()) out += " · ";
        out += c->kind == EstimandKind::Marginal ? "[" + to_text(*c) + "]" : to_text(*c);
      }
      return out.empty() ? "1" : out;
    }
    case EstimandKind::Fail:
      return "FAIL";
  }
  return "FAIL";
}

nlohmann::json to_json(const Estimand& e) {
  nlohmann::json j;
  j["kind"] = to_string(e.kind);
  switch (e.kind) {
    case EstimandKind::Kernel:
      j["target"] = e.target;
      j["given"] = e.given;
      j["do"] = e.intervened;
      break;
    case EstimandKind::Conditional:
      j["target"] = e.target;
      j["given"] = e.given;
      j["child"] = to_json(*e.children.front());
      break;
    case EstimandKind::Marginal:
      j["over"] = e.over;
      j["child"] = to_json(*e.children.front());
      break;
    case EstimandKind::Product: {
      nlohmann::json factors = nlohmann::json::array();
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        nlohmann::json f = to_json(*e.children[i]);
        if (!e.sccs[i].empty()) f["scc"] = e.sccs[i];
        factors.push_back(std::move(f));
      }
      j["factors"] = std::move(factors);
      break;
    }
    case EstimandKind::Fail:
      break;
  }
  return j;
}

Factor evaluate_estimand(const Estimand& e, const DiscreteJoint& joint) {
  switch (e.kind) {
    case EstimandKind::Kernel: {
      for (const auto& v : e.intervened)
        if (!joint.inputs.count(v))
          throw Error(ErrorCode::MalformedQuery, "kernel intervenes on " + v + ", which is not an input of the law", v);
      const NodeSet keep = unite(unite(e.target, e.given), joint.inputs);
      const Factor num = joint.table.marginal(keep);
      if (e.given.empty()) return num;
      return num.divide(num.sum_out(e.target));
    }
    case EstimandKind::Conditional: {
      const Factor child = evaluate_estimand(*e.children.front(), joint);
      const NodeSet drop = minus(e.children.front()->free_vars(), unite(e.target, e.given));
      const Factor num = child.sum_out(drop);
      return num.divide(num.sum_out(e.target));
    }
    case EstimandKind::Marginal:
      return evaluate_estimand(*e.children.front(), joint).sum_out(e.over);
    case EstimandKind::Product: {
      Factor out = Factor::constant(1.0);
      for (const auto& c : e.children) out = out.product(evaluate_estimand(*c, joint));
      return out;
    }
    case EstimandKind::Fail:
      break;
  }
  throw Error(ErrorCode::MalformedQuery, "a failed identification has no value");
}

}  // namespace ioscm
