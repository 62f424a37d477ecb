#pragma once

#include <string>

#include "ioscm/dmg.hpp"
#include "ioscm/separation.hpp"

namespace ioscm {

enum class Rule { One = 1, Two = 2, Three = 3 };

struct RuleQuery {
  Rule rule = Rule::One;
  NodeSet x;
  NodeSet y;
  NodeSet z;
  // Held-fixed interventions. Input nodes of the graph are always added.
  NodeSet w;
  // Also condition on the intervened outputs W \ J.
  bool condition_on_inputs = false;
};

struct RuleVerdict {
  bool applicable = false;
  SeparationQuery separation_checked;
  Dmg graph_used;
  // Empty unless applicable.
  std::string conclusion;
};

// The extended graph of g after intervening on the outputs in w.
Dmg extended_intervened(const Dmg& g, const NodeSet& w);

// Renders P(target | given..., do(d)) with empty parts omitted.
std::string render_kernel(const NodeSet& target, const std::vector<std::string>& given, const NodeSet& d = {});

RuleVerdict check_rule(const Dmg& g, const RuleQuery& q);

// True when P(A | B, do(J)) does not depend on the inputs in i.
bool check_mechanism_change(const Dmg& g, const NodeSet& a, const NodeSet& b, const NodeSet& i);

// Conditional ignorability Y' ⫫ X | Z on the twin graph, or the strong form
// {Y, Y'} ⫫ X | Z.
bool check_ignorability(const Dmg& g, const NodeSet& y, const NodeSet& x, const NodeSet& z, bool strong);

}  // namespace ioscm
