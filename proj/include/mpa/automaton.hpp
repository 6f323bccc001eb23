#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpa/maneuver_optimizer.hpp"
#include "mpa/trims.hpp"

namespace mpa {

struct TrimVertex {
    Trim trim;
    GroupElement self_loop;  ///< trim_displacement(trim)

    friend bool operator==(const TrimVertex&, const TrimVertex&) = default;
};

/// Trims as vertices, objective-labelled maneuvers as directed edges.
/// Immutable after construction; configure_subgraph returns a new automaton.
struct MotionPrimitiveAutomaton {
    VehicleParams params;
    double step_duration = kStepDuration;
    std::vector<TrimVertex> trims;
    std::vector<Maneuver> maneuvers;

    const TrimVertex* find_trim(int id) const;
    const Maneuver* find_maneuver(int from, int to, Objective objective) const;

    friend bool operator==(const MotionPrimitiveAutomaton&, const MotionPrimitiveAutomaton&) = default;
};

/// Directed trim pairs to connect with maneuvers.
using Connectivity = std::vector<std::pair<int, int>>;

/// Default connection pattern for the standard table: each moving trim links
/// both ways to its first and second neighbours in table order, and the
/// standstill trim links both ways to pi2, pi7 and pi12.
Connectivity default_connectivity();

/// Computes the maneuvers of one trim pair for the requested objectives.
using PairOptimizer =
    std::function<std::vector<Maneuver>(const Trim& from, const Trim& to, std::span<const Objective> objectives)>;

/// Anchors once per pair, then J3 as the normalized w = 0.5 compromise.
PairOptimizer default_pair_optimizer(const VehicleParams& params, int intervals = 20);

struct BuildLog {
    std::vector<std::string> omitted;  ///< infeasible pairs with the reason
};

/// Builds the universal automaton. Infeasible pairs are omitted and logged;
/// any optimizer failure on a feasible pair throws BuildError listing them.
MotionPrimitiveAutomaton build_universal_automaton(std::span<const Trim> trims, std::span<const Objective> objectives,
                                                   const Connectivity& connectivity, const VehicleParams& params,
                                                   const PairOptimizer& optimizer, BuildLog* log = nullptr);

MotionPrimitiveAutomaton build_universal_automaton(std::span<const Trim> trims, std::span<const Objective> objectives,
                                                   const Connectivity& connectivity, const VehicleParams& params,
                                                   BuildLog* log = nullptr);

struct SubgraphConfig {
    std::set<int> enabled_trims;
    Objective objective = Objective::J3;
};

/// Presets A, B, C (all trims; J1, J2, J3 edges) and D (8 trims; J3 edges).
SubgraphConfig subgraph_preset(char name);
SubgraphConfig subgraph_preset(std::string_view name);

/// Restriction to the enabled trims and to edges labelled cfg.objective.
/// Throws ConfigError if cfg is inconsistent with the automaton.
MotionPrimitiveAutomaton configure_subgraph(const MotionPrimitiveAutomaton& ua, const SubgraphConfig& cfg);

/// Fewest steps from each trim to the standstill trim; absent if unreachable.
std::map<int, int> steps_to_standstill(const MotionPrimitiveAutomaton& a);

struct EdgeReport {
    int from = 0;
    int to = 0;
    Objective objective = Objective::J3;
    double dynamics_residual = 0.0;
    double boundary_residual = 0.0;
    double bound_violation = 0.0;
    bool ok = true;
};

struct ValidationReport {
    std::vector<std::string> failures;
    std::vector<EdgeReport> edges;
    std::map<int, int> steps_to_standstill;

    bool ok() const { return failures.empty(); }
};

ValidationReport validate_automaton(const MotionPrimitiveAutomaton& a);

inline constexpr int kAutomatonFormatVersion = 1;

std::string automaton_to_json(const MotionPrimitiveAutomaton& a);
/// Throws ParseError on malformed text and IntegrityError on failed validation.
MotionPrimitiveAutomaton automaton_from_json(const std::string& text);

void save_automaton(const MotionPrimitiveAutomaton& a, const std::filesystem::path& path);
MotionPrimitiveAutomaton load_automaton(const std::filesystem::path& path);

/// {"trims": [{"id", "v", "delta"}, ...]}
std::vector<Trim> load_trims(const std::filesystem::path& path);
/// {"pairs": [[from, to], ...]}
Connectivity load_connectivity(const std::filesystem::path& path);

}  // namespace mpa
