#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mpa/planner.hpp"
#include "mpa/reference_path.hpp"

namespace mpa {

struct VehicleSpec {
    std::string id;
    std::string color;  ///< SVG colour
    GroupElement start_pose;
    int start_trim = kStandstill;
    ReferencePath reference;
    std::string preset = "C";    ///< subgraph preset letter
    double nominal_speed = 0.6;  ///< reference progress speed [m/s]
};

/// Vehicles are listed in priority order (first = highest).
struct Scenario {
    std::string name;
    double map_width = 0.0;
    double map_height = 0.0;
    int steps = 0;
    double step_duration = kStepDuration;
    PlannerConfig planner;
    std::vector<VehicleSpec> vehicles;
};

/// Parses and validates a scenario file. Errors name the offending field.
Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from_json(const std::string& text, const std::string& source = "scenario");

/// Throws ConfigError on violated invariants.
void validate(const Scenario& s);

}  // namespace mpa
