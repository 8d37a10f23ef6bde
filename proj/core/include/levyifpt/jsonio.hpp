#pragma once

#include "levyifpt/cva.hpp"
#include "levyifpt/ifpt.hpp"
#include "levyifpt/model.hpp"
#include "levyifpt/survival.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace levyifpt {

/// Model JSON, field names bit-exact:
///   {"kind":"mixed_exp"|"brownian","sigma":..,"eta":..,"ell":..,"p":..,
///    "up":[{"a":..,"alpha":..},...],"down":[...]}
/// Unknown keys are rejected.
LevyModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const LevyModel& model);

/// Curve JSON: {"kind":"exponential","rate":..,"horizon":..} |
/// {"kind":"weibull","shape":..,"scale":..,"horizon":..} |
/// {"kind":"piecewise_hazard","breakpoints":[..],"rates":[..],"horizon":..} |
/// {"kind":"table","t":[..],"survival":[..],"horizon":..}
SurvivalCurve curve_from_json(const nlohmann::json& j);
nlohmann::json curve_to_json(const SurvivalCurve& curve);

/// {"states":[{"p":..,"names":[{"model":{..},"curve":{..},"lambda":..},..]},..]}
FrailtySpec frailty_from_json(const nlohmann::json& j);

/// Mirrors CvaSpec field names; "numerics" is optional.
CvaSpec cva_spec_from_json(const nlohmann::json& j);

LevyModel load_model(const std::string& path);
SurvivalCurve load_curve(const std::string& path);
FrailtySpec load_frailty(const std::string& path);
CvaSpec load_cva_spec(const std::string& path);

/// Serialization with every float printed at 17 significant digits.
std::string dump_json17(const nlohmann::json& j, int indent = 0);

} // namespace levyifpt
