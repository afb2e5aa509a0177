#pragma once

#include <json.hpp>

#include "spinbath/scenario.hpp"

namespace spinbath {

nlohmann::json scenario_json(const Scenario& s);

}  // namespace spinbath
