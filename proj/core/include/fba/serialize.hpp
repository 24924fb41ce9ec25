#pragma once

#include <nlohmann/json.hpp>

#include "fba/baxterflow.hpp"
#include "fba/laurent.hpp"
#include "fba/tropical.hpp"

namespace fba {

inline constexpr const char* kSchemaVersion = "fba-spec-1";

nlohmann::json to_json(cplx z);  // [re, im]
nlohmann::json to_json(const LaurentPoly& p);  // {"k": [re, im], ...}
nlohmann::json to_json(const baxterflow::BetheSolution& sol);
nlohmann::json to_json(const tropical::SeedState& seed);
nlohmann::json to_json(const tropical::SeedReport& rep);

}  // namespace fba
