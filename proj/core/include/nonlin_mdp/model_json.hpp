#pragma once

#include <string>

#include "nonlin_mdp/discount.hpp"
#include "nonlin_mdp/model.hpp"

namespace nonlin_mdp {

// Model schema: top-level keys "states", "actions", "admissible",
// "transition" ([x][a][y], row-major), "utility" ([x][a], the string
// "-inf" allowed in unbounded mode), "weight", "mode".
std::string model_to_json(const FiniteModel& model);
FiniteModel model_from_json(const std::string& text);

FiniteModel load_model(const std::string& path);
void save_model(const FiniteModel& model, const std::string& path);

// Discount schema: {"kind": "linear"|"sign_effect"|"log_blend"|"log_blend2",
// "params": {...}}.
std::string discount_to_json(const DiscountFunction& d);
DiscountFunction discount_from_json(const std::string& text);

DiscountFunction load_discount(const std::string& path);

/// Compact inline form, e.g. "linear:0.9", "sign_effect:0.5,0.9",
/// "log_blend:0.5", "log_blend2:0.25".
DiscountFunction parse_discount_spec(const std::string& spec);

} // namespace nonlin_mdp
