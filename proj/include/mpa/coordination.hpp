#pragma once

#include <optional>
#include <vector>

#include "mpa/planner.hpp"

namespace mpa {

/// One vehicle's input to a coordination round, in priority order.
struct VehicleRequest {
    const PrimitiveGraph* graph = nullptr;
    GroupElement pose;
    int trim = 0;
    std::vector<Vec2> targets;  ///< one per horizon step
    /// Committed plan of the last round, whose first step ends at `pose`.
    /// Without one the fallback is standstill_plan from `pose`.
    std::optional<Plan> previous;
};

struct VehicleOutcome {
    Plan plan;
    PlanStatus status = PlanStatus::Ok;  ///< search outcome; the plan is a fallback unless Ok
    PlanStats stats;
    bool fallback = false;
};

/// Plans the vehicles in list order. Vehicle i avoids the new plans of
/// vehicles before it and the fallback plans of vehicles after it, so a
/// lower-priority vehicle can always keep its fallback. A vehicle whose
/// search fails keeps shift_fallback of its previous plan.
std::vector<VehicleOutcome> prioritized_step(const std::vector<VehicleRequest>& vehicles, const PlannerConfig& cfg);

/// Builds the obstacle schedule for one vehicle from the other plans.
ObstacleSchedule obstacle_schedule(const std::vector<const Plan*>& others, const std::vector<double>& radii,
                                   int horizon);

}  // namespace mpa
