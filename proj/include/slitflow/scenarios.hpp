#pragma once

// Scenario configurations shipped with the binary.

#include <span>
#include <string_view>

#include "slitflow/config.hpp"

namespace slitflow {

struct BundledScenario {
  std::string_view name;
  std::string_view description;
  std::string_view text;  ///< configuration file contents
};

std::span<const BundledScenario> bundled_scenarios();

/// nullptr when no bundled scenario has this name.
const BundledScenario* find_scenario(std::string_view name);

/// Parsed configuration of a bundled scenario. Throws InvalidArgument for an
/// unknown name.
ScenarioConfig scenario_config(std::string_view name);

}  // namespace slitflow
