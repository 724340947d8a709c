#pragma once

#include <memory>
#include <string>

#include "json.hpp"

#include "minfind/model.hpp"

namespace minfind {

/// Human-readable listing: domains, D-rules, C-rules and facts in canonical order.
std::string model_to_text(const FiniteModel& m);

/// {sorts, funcs, preds, d_rules, c_rules, facts}. Function tables are keyed
/// by the space-separated argument names ("" for constants).
nlohmann::ordered_json model_to_json(const FiniteModel& m);

/// Rebuilds a model over `sig` from model_to_json output (sorts, funcs,
/// preds and the aliases in d_rules are read; the rest is derived).
FiniteModel model_from_json(const nlohmann::json& j, std::shared_ptr<const Signature> sig);

}  // namespace minfind
