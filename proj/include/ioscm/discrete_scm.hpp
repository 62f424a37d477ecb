#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ioscm/dmg.hpp"
#include "ioscm/factor.hpp"

namespace ioscm {

/// Mechanism g_S of one loop: a lookup table from parent configurations to
/// loop configurations. Configurations are mixed-radix codes over the sorted
/// variable lists, last variable fastest.
struct LoopMechanism {
  std::vector<NodeId> members;
  std::vector<NodeId> parents;
  std::vector<std::uint32_t> table;
};

/// Finite-domain ioSCM.
///
/// The graph carries latent nodes explicitly (the noise variables). Every
/// strongly connected component of outputs needs a mechanism; mechanisms of
/// smaller loops are optional and only required by interventions that split
/// a component.
class DiscreteScm {
 public:
  DiscreteScm(Dmg graph, std::map<NodeId, int> cards, std::map<NodeId, std::vector<double>> noise,
              std::vector<LoopMechanism> mechanisms);

  // Local structural equation: value of output v given the values of all its
  // parents in the graph.
  using LocalEquation = std::function<int(const NodeId& v, const Assignment& parents)>;

  // Builds the mechanism of every loop inside each strongly connected
  // component by solving the local equations; components without a unique
  // solution raise NotUniquelySolvable. Sub-loops without a unique solution
  // are left unregistered.
  static DiscreteScm from_equations(Dmg graph, std::map<NodeId, int> cards,
                                    std::map<NodeId, std::vector<double>> noise, const LocalEquation& f);

  const Dmg& graph() const { return graph_; }
  const std::map<NodeId, int>& cards() const { return cards_; }
  int card(const NodeId& v) const { return cards_.at(v); }
  const std::map<NodeId, std::vector<double>>& noise() const { return noise_; }
  const std::map<NodeSet, LoopMechanism>& mechanisms() const { return mechanisms_; }
  bool has_mechanism(const NodeSet& loop) const { return mechanisms_.count(loop) > 0; }

  // Applies g_S to the parent values found in `values` and writes the loop's
  // values back into it.
  void apply(const NodeSet& loop, Assignment& values) const;

 private:
  Dmg graph_;
  std::map<NodeId, int> cards_;
  std::map<NodeId, std::vector<double>> noise_;
  std::map<NodeSet, LoopMechanism> mechanisms_;
};

// Encodes/decodes mixed-radix configurations of sorted variable lists.
std::uint32_t encode(const std::vector<NodeId>& vars, const std::map<NodeId, int>& cards, const Assignment& a);
void decode(std::uint32_t code, const std::vector<NodeId>& vars, const std::map<NodeId, int>& cards, Assignment& a);

// Calls visit(values, probability) for every input and latent assignment with
// positive mass; `values` covers every node, outputs solved. Inputs listed in
// `fixed` keep their given value instead of being enumerated.
using AtomVisitor = std::function<void(const Assignment& values, double probability)>;
void for_each_atom(const DiscreteScm& m, const AtomVisitor& visit, const Assignment& fixed = {},
                   std::size_t max_states = 1000000);

// P(V | do(J)) by exhaustive enumeration of inputs and latent values. The
// table covers V and the inputs not listed in `fixed`.
DiscreteJoint enumerate_joint(const DiscreteScm& m, const Assignment& fixed = {}, std::size_t max_states = 1000000);

// Perfect intervention: w become inputs, mechanisms of loops meeting w are
// dropped, and every remaining component must still have a mechanism.
DiscreteScm intervene_scm(const DiscreteScm& m, const NodeSet& w);

// Law of the outputs after setting the nodes in `values` (outputs or inputs)
// to fixed values; remaining inputs stay free.
DiscreteJoint interventional_joint(const DiscreteScm& m, const Assignment& values);

// Adds indicator inputs I_v whose extra value card(v) stands for "observe".
DiscreteScm extend_scm(const DiscreteScm& m);
inline int observe_value(const DiscreteScm& m, const NodeId& v) { return m.card(v); }

struct CompatibilityViolation {
  NodeSet outer;
  NodeSet inner;
  // A parent assignment of the outer loop witnessing the disagreement.
  Assignment witness;
};

std::vector<CompatibilityViolation> validate_compatibility(const DiscreteScm& m);

// Sub-model on the outputs d: parents of d outside d become inputs and only
// mechanisms of loops inside d are kept.
DiscreteScm sub_model(const DiscreteScm& m, const NodeSet& d);

// i.i.d. draws of all outputs for fixed input values.
std::vector<Assignment> sample(const DiscreteScm& m, const Assignment& inputs, std::size_t n, std::uint64_t seed);

}  // namespace ioscm
