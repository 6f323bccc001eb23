#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpa/automaton.hpp"
#include "mpa/coordination.hpp"
#include "mpa/scenario.hpp"

namespace mpa {

struct StepRecord {
    int step = 0;  ///< 1-based; the state is the one reached after this step
    int trim_from = 0;
    int trim_to = 0;
    Objective objective = Objective::J3;
    State state;
    Vec2 reference_point;   ///< nearest point on the reference
    double deviation = 0.0;  ///< distance to reference_point [m]
    double progress = 0.0;   ///< accumulated arc-length progress [m]
    std::size_t expanded = 0;
    std::size_t generated = 0;
    double wall_ms = 0.0;
    PlanStatus status = PlanStatus::Ok;
    bool fallback = false;

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct VehicleLog {
    std::string id;
    std::string color;
    std::string preset;
    double reference_length = 0.0;
    State start;
    std::vector<StepRecord> steps;

    friend bool operator==(const VehicleLog&, const VehicleLog&) = default;
};

struct RunLog {
    double step_duration = kStepDuration;
    double safety_margin = 0.0;
    double footprint_radius = 0.0;
    std::vector<VehicleLog> vehicles;

    friend bool operator==(const RunLog&, const RunLog&) = default;
};

/// Preset letters keyed by vehicle id; vehicles not listed keep the scenario's.
using PresetMap = std::map<std::string, std::string>;

/// Parses "red=A,blue=C". Throws ConfigError on malformed entries.
PresetMap parse_preset_map(const std::string& text);

/// Closed loop over a scenario, advanced one planning step at a time.
class ClosedLoop {
public:
    ClosedLoop(const Scenario& scenario, const MotionPrimitiveAutomaton& ua, const PresetMap& presets = {});

    /// Plans all vehicles in priority order and executes each plan's first primitive.
    void step();

    const RunLog& log() const { return log_; }
    /// Outcomes of the most recent step, in priority order.
    const std::vector<VehicleOutcome>& last_outcomes() const { return last_; }
    /// Reference targets each vehicle would be given at the next step.
    std::vector<std::vector<Vec2>> targets() const;
    const PrimitiveGraph& graph(std::size_t vehicle) const { return graphs_.at(vehicle); }

private:
    struct VehicleState {
        GroupElement pose;
        int trim = 0;
        double s_start = 0.0;  ///< arc length at t = 0
        double s_track = 0.0;  ///< windowed projection of the current position
        double progress = 0.0;
        std::optional<Plan> previous;
    };

    Scenario scenario_;
    std::vector<PrimitiveGraph> graphs_;
    std::vector<VehicleState> vehicles_;
    std::vector<VehicleOutcome> last_;
    RunLog log_;
};

/// Closed-loop run: each step plans all vehicles in priority order and
/// executes the first primitive of each plan.
RunLog run_scenario(const Scenario& scenario, const MotionPrimitiveAutomaton& ua, const PresetMap& presets = {});

/// Per-sample disc violations between vehicles over the executed steps
/// (midpoints and ends), using the logged primitives.
struct SafetyAudit {
    std::size_t checks = 0;
    std::size_t violations = 0;
    double min_clearance = 0.0;  ///< smallest distance minus radii and margin
};

SafetyAudit audit_safety(const RunLog& log, const MotionPrimitiveAutomaton& ua);

/// Largest pose mismatch when re-integrating each vehicle's logged primitives.
double replay_error(const RunLog& log, const MotionPrimitiveAutomaton& ua);

}  // namespace mpa
