#include "mpa/coordination.hpp"

#include <cmath>

#include "mpa/errors.hpp"

namespace mpa {

ObstacleSchedule obstacle_schedule(const std::vector<const Plan*>& others, const std::vector<double>& radii,
                                   int horizon) {
    ObstacleSchedule sched(2 * horizon);
    for (std::size_t j = 0; j < others.size(); ++j) {
        const auto occ = others[j]->occupancy(radii[j]);
        if (occ.size() != sched.size()) throw InvariantError("obstacle plan length differs from the horizon");
        for (std::size_t s = 0; s < occ.size(); ++s) sched[s].push_back(occ[s]);
    }
    return sched;
}

std::vector<VehicleOutcome> prioritized_step(const std::vector<VehicleRequest>& vehicles, const PlannerConfig& cfg) {
    validate(cfg);
    const std::size_t n = vehicles.size();
    std::vector<Plan> fallbacks;
    std::vector<double> radii;
    for (const auto& v : vehicles) {
        if (!v.graph) throw ConfigError("vehicle request without an automaton");
        if (v.previous) {
            const GroupElement& end = v.previous->steps.front().pose;
            if (v.previous->steps.front().to != v.trim || std::abs(end.dx - v.pose.dx) > 1e-9 ||
                std::abs(end.dy - v.pose.dy) > 1e-9 || std::abs(end.dpsi - v.pose.dpsi) > 1e-9) {
                throw ConfigError("previous plan does not continue from the vehicle's current state");
            }
            fallbacks.push_back(shift_fallback(*v.previous, *v.graph));
        } else {
            fallbacks.push_back(standstill_plan(*v.graph, v.pose, v.trim, cfg.horizon));
        }
        radii.push_back(v.graph->params().footprint_radius);
    }

    std::vector<VehicleOutcome> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const VehicleRequest& v = vehicles[i];
        std::vector<const Plan*> others;
        std::vector<double> other_radii;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            others.push_back(j < i ? &out[j].plan : &fallbacks[j]);
            other_radii.push_back(radii[j]);
        }
        const ObstacleSchedule sched = others.empty() ? ObstacleSchedule{} : obstacle_schedule(others, other_radii, cfg.horizon);
        PlanResult r = plan_horizon(*v.graph, v.pose, v.trim, v.targets, sched, cfg);
        out[i].status = r.status;
        out[i].stats = r.stats;
        if (r.status == PlanStatus::Ok) {
            out[i].plan = std::move(*r.plan);
        } else {
            out[i].plan = fallbacks[i];
            out[i].fallback = true;
        }
    }
    return out;
}

}  // namespace mpa
