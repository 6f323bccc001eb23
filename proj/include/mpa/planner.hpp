#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpa/automaton.hpp"
#include "mpa/geometry.hpp"

namespace mpa {

/// One outgoing edge of a trim: its self-loop or a maneuver.
struct Primitive {
    int from = 0;
    int to = 0;
    Objective objective = Objective::J3;
    GroupElement displacement;
    GroupElement midpoint;  ///< pose at half the step duration
    int maneuver = -1;      ///< index into automaton().maneuvers, -1 for self-loops
};

/// Adjacency view of an automaton prepared for search.
class PrimitiveGraph {
public:
    /// Throws ConfigError if the automaton fails validation.
    explicit PrimitiveGraph(MotionPrimitiveAutomaton a);

    const MotionPrimitiveAutomaton& automaton() const { return a_; }
    const VehicleParams& params() const { return a_.params; }
    double step_duration() const { return a_.step_duration; }

    bool has_trim(int id) const;
    const Trim& trim(int id) const;
    /// Self-loop first, then maneuvers in automaton order.
    std::span<const Primitive> outgoing(int trim_id) const;
    bool reaches_standstill(int trim_id) const;
    /// First primitive of a shortest route to standstill; the standstill
    /// self-loop for the standstill trim. Throws InvariantError if unreachable.
    const Primitive& route_to_standstill(int trim_id) const;
    /// Largest planar distance covered by any primitive in one step.
    double max_step_distance() const { return max_step_distance_; }

private:
    std::size_t index(int id) const;

    MotionPrimitiveAutomaton a_;
    std::vector<int> ids_;
    std::vector<std::vector<Primitive>> out_;
    std::vector<int> route_;  ///< index into out_[i], -1 if no route
    double max_step_distance_ = 0.0;
};

struct PlannerConfig {
    int horizon = 8;
    double heuristic_weight = 0.0;
    double safety_margin = 0.02;
    std::size_t expansion_cap = 1'000'000;
};

void validate(const PlannerConfig& cfg);

struct PlanStep {
    int from = 0;
    int to = 0;
    Objective objective = Objective::J3;
    GroupElement pose;  ///< absolute pose at the end of the step
    Vec2 midpoint;      ///< absolute position at half the step

    friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

/// H steps of automaton primitives from a start pose and trim.
struct Plan {
    GroupElement start_pose;
    int start_trim = 0;
    std::vector<PlanStep> steps;
    double cost = 0.0;  ///< search cost; 0 for fallback constructions

    int final_trim() const { return steps.empty() ? start_trim : steps.back().to; }
    /// Discs at each step's midpoint and end: sample 2k is the midpoint of step
    /// k, sample 2k + 1 its end (k from 0).
    std::vector<Disc> occupancy(double radius) const;

    friend bool operator==(const Plan&, const Plan&) = default;
};

/// Obstacle discs per occupancy sample, indexed like Plan::occupancy.
using ObstacleSchedule = std::vector<std::vector<Disc>>;

enum class PlanStatus { Ok, Infeasible, CapExceeded };

std::string_view to_string(PlanStatus s);

struct PlanStats {
    std::size_t expanded = 0;
    std::size_t generated = 0;
    double wall_ms = 0.0;
};

struct PlanResult {
    PlanStatus status = PlanStatus::Infeasible;
    std::optional<Plan> plan;
    PlanStats stats;
};

/// Squared planar distance between a pose and a target point.
double stage_cost(const GroupElement& pose, Vec2 target);

/// True iff the disc keeps at least r1 + r2 + margin from every obstacle center.
bool collision_free(const Disc& self, std::span<const Disc> obstacles, double margin);

/// Best-first search for the minimum-cost H-step plan. targets[k] is the
/// reference point for the end of step k; obstacles may be empty or hold
/// 2H samples. The final trim of the plan reaches standstill.
PlanResult plan_horizon(const PrimitiveGraph& graph, const GroupElement& start_pose, int start_trim,
                        std::span<const Vec2> targets, const ObstacleSchedule& obstacles, const PlannerConfig& cfg);

/// Drops the first step and appends one step along the route to standstill.
Plan shift_fallback(const Plan& previous, const PrimitiveGraph& graph);

/// Follows the route to standstill for H steps from the given start.
Plan standstill_plan(const PrimitiveGraph& graph, const GroupElement& start_pose, int start_trim, int horizon);

/// Absolute end state and midpoint of applying a primitive at a pose.
PlanStep apply_primitive(const Primitive& prim, const GroupElement& pose);

/// Re-integrates the plan's primitives from its start and returns the end
/// pose of every step.
std::vector<GroupElement> replay_plan(const Plan& plan, const PrimitiveGraph& graph);

}  // namespace mpa
