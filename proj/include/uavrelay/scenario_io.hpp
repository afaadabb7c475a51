#pragma once
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "uavrelay/channel.hpp"
#include "uavrelay/multisource.hpp"
#include "uavrelay/stochastic.hpp"

namespace uavrelay {

struct ScenarioBundle {
  Scenario scenario;
  std::vector<InterferenceSource> sources;
  std::optional<InterferenceModel> field;
};

// YAML or JSON text; every problem is reported as SchemaError with a 1-based line/column
ScenarioBundle parse_scenario_text(const std::string& text);
ScenarioBundle parse_scenario(const std::string& path);

// inverse of the parser, used for records and sweeps
nlohmann::json scenario_to_json(const ScenarioBundle& b);
ScenarioBundle scenario_from_json(const nlohmann::json& j);

// scalar field names accepted by sweeps: d_m, msi_x_m, ..., p_msi_w, eta_nlos, ...
void set_scenario_field(ScenarioBundle& b, const std::string& name, double value);

}  // namespace uavrelay
