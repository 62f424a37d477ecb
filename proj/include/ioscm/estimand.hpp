#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ioscm/dmg.hpp"
#include "ioscm/factor.hpp"

namespace ioscm {

enum class EstimandKind { Kernel, Conditional, Marginal, Product, Fail };

std::string_view to_string(EstimandKind kind);

struct Estimand;
using EstimandPtr = std::shared_ptr<const Estimand>;

/// Expression tree over observational kernels.
///
/// Kernel:      P(target | given ; do(intervened)), read off P(V | do(J)).
/// Conditional: the conditional of child's law for target given `given`.
/// Marginal:    child with the variables in `over` integrated out.
/// Product:     factors in the stored order; `sccs[i]` is the strongly
///              connected component factor i was built for (may be empty).
/// Fail:        the effect could not be identified.
struct Estimand {
  EstimandKind kind = EstimandKind::Fail;
  NodeSet target;
  NodeSet given;
  NodeSet intervened;
  NodeSet over;
  std::vector<EstimandPtr> children;
  std::vector<NodeSet> sccs;

  static EstimandPtr kernel(NodeSet target, NodeSet given, NodeSet intervened);
  static EstimandPtr conditional(EstimandPtr child, NodeSet target, NodeSet given);
  static EstimandPtr marginal(EstimandPtr child, NodeSet over);
  static EstimandPtr product(std::vector<EstimandPtr> factors, std::vector<NodeSet> sccs);
  static EstimandPtr fail();

  bool failed() const { return kind == EstimandKind::Fail; }
  // Variables the expression is a distribution over.
  NodeSet free_vars() const;
};

std::string to_text(const Estimand& e);
nlohmann::json to_json(const Estimand& e);

// Numeric value of an estimand on the law of a discrete model. The result is
// a table over the free variables and any conditioning or input variables.
Factor evaluate_estimand(const Estimand& e, const DiscreteJoint& joint);

}  // namespace ioscm
