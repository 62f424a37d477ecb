#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "ioscm/discrete_scm.hpp"
#include "ioscm/linear_scm.hpp"

namespace ioscm {

// Linear:   {"kind":"linear","outputs":[..],"inputs":[..],"B":[[..]],"Gamma":[[..]],
//            "Omega":[[..]],"mu":[..]} with an optional "graph" that must match.
// Discrete: {"kind":"discrete","graph":{..},"domains":{"v":k},"noise":{"u":[p..]},
//            "mechanisms":[{"loop":[..],"table":[[x..]..]}]}; table row i holds
//            the loop values (sorted members) for parent configuration i.
struct Model {
  std::optional<LinearScm<double>> linear;
  std::optional<DiscreteScm> discrete;

  bool is_linear() const { return linear.has_value(); }
  Dmg graph() const { return linear ? linear->graph() : discrete->graph(); }
};

// Throws Error(InvalidModel) naming the offending field.
Model model_from_json(const nlohmann::json& j);
Model load_model(const std::string& path);

nlohmann::json model_to_json(const LinearScm<double>& m);
nlohmann::json model_to_json(const DiscreteScm& m);

}  // namespace ioscm
