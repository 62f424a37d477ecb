#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "ioscm/dmg.hpp"

namespace ioscm {

using Assignment = std::map<NodeId, int>;

/// Dense table over finitely many discrete variables.
///
/// Variables are kept sorted by id; values are stored row-major with the last
/// variable varying fastest. A factor with no variables holds one number.
class Factor {
 public:
  Factor() : values_{1.0} {}
  Factor(std::vector<NodeId> vars, std::vector<int> cards, std::vector<double> values);
  static Factor constant(double v);
  static Factor zeros(std::vector<NodeId> vars, std::vector<int> cards);

  const std::vector<NodeId>& vars() const { return vars_; }
  const std::vector<int>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  std::size_t size() const { return values_.size(); }
  NodeSet scope() const { return NodeSet(vars_.begin(), vars_.end()); }
  int card(const NodeId& v) const;

  // Flat position of an assignment covering at least the factor's variables.
  std::size_t offset(const Assignment& a) const;
  Assignment assignment(std::size_t offset) const;
  double at(const Assignment& a) const { return values_[offset(a)]; }
  double& at(const Assignment& a) { return values_[offset(a)]; }

  Factor product(const Factor& other) const;
  Factor sum_out(const NodeSet& vars) const;
  Factor marginal(const NodeSet& keep) const;
  // Pointwise quotient; a zero denominator raises DomainGap.
  Factor divide(const Factor& other) const;
  // Fixes variables to values and drops them from the scope.
  Factor reduce(const Assignment& a) const;
  double total() const;

 private:
  std::vector<NodeId> vars_;
  std::vector<int> cards_;
  std::vector<double> values_;
};

// Largest absolute difference after broadcasting both factors to the union
// of their scopes.
double max_abs_diff(const Factor& a, const Factor& b);

/// Conditional law P(V | do(J)) of a discrete model: a table over V ∪ J whose
/// entries sum to one over V for every input assignment.
struct DiscreteJoint {
  Factor table;
  NodeSet outputs;
  NodeSet inputs;
};

}  // namespace ioscm
