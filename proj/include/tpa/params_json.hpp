#pragma once

#include <json.hpp>

#include "tpa/core.hpp"

namespace tpa {

/// {"gamma","delta_big","mu","phi","a_ratio","delta","dist":{"kind","gamma_v"}}
/// All keys are required; unknown keys raise InvalidParameter.
nlohmann::json to_json(const ParameterSet& params);
ParameterSet parameter_set_from_json(const nlohmann::json& doc);

}  // namespace tpa
