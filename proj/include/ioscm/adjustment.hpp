#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ioscm/dmg.hpp"
#include "ioscm/separation.hpp"

namespace ioscm {

/// Role sets of an adjustment query. z = z0 ∪ zplus. Input nodes of the
/// graph are always added to w.
struct AdjustmentSpec {
  NodeSet y;
  NodeSet x;
  NodeSet c;
  NodeSet z0;
  NodeSet zplus;
  NodeSet l;
  NodeSet s;
  NodeSet w;
};

/// Roles for adjustment with partial external data.
struct PartialExternalSpec {
  NodeSet y;
  NodeSet x;
  NodeSet s;
  NodeSet z0a;
  NodeSet z0b;
  NodeSet z1a;
  NodeSet z1b;
  NodeSet z2;
  NodeSet z3;
  NodeSet l0;
  NodeSet l1;
};

enum class AdjustmentVariant { General, NoExternalData, PartialExternalData };
enum class SpecialCase { Backdoor, ExtendedBackdoor, SelectionBackdoor, GeneralSelectionBackdoor };

std::string_view to_string(AdjustmentVariant v);
std::string_view to_string(SpecialCase c);
SpecialCase parse_special_case(std::string_view text);

/// Adjustment formula. `text` uses role names (Y, X, Z, C, S, W) and omits
/// empty roles; `expanded` spells out node ids. Neither mentions L.
struct AdjustmentFormula {
  AdjustmentVariant variant = AdjustmentVariant::General;
  std::string target;
  std::string integrand;
  std::string mixing;
  std::string text;
  std::string expanded;
};

struct ConditionResult {
  std::string label;
  // Graph on which the query was evaluated: "extended" or "extended_do_x".
  std::string graph;
  SeparationQuery query;
  bool holds = false;
};

struct AdjustmentVerdict {
  bool applicable = false;
  std::vector<ConditionResult> conditions;
  std::optional<AdjustmentFormula> formula;
};

AdjustmentVerdict check_general_adjustment(const Dmg& g, const AdjustmentSpec& spec);
AdjustmentVerdict check_special_case(const Dmg& g, const AdjustmentSpec& spec, SpecialCase which);
AdjustmentVerdict check_selection_without_external(const Dmg& g, const AdjustmentSpec& spec);
AdjustmentVerdict check_partial_external(const Dmg& g, const PartialExternalSpec& spec);

struct AdjustmentAssignment {
  NodeSet z0;
  NodeSet zplus;
  NodeSet l;
};

struct AdjustmentSearch {
  NodeSet y;
  NodeSet x;
  NodeSet c;
  NodeSet s;
  NodeSet w;
  // Upper bound on |z0| + |zplus| + |l|.
  std::size_t max_size = 5;
  unsigned threads = 1;
};

/// Exhaustive search over the output nodes outside every fixed role (at most
/// 16). Returns one assignment per distinct z0 ∪ zplus, smaller sets first.
std::vector<AdjustmentAssignment> find_adjustment_sets(const Dmg& g, const AdjustmentSearch& search);

}  // namespace ioscm
