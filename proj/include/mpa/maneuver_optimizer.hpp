#pragma once

#include <span>
#include <vector>

#include "mpa/augmented_lagrangian.hpp"
#include "mpa/running_cost.hpp"
#include "mpa/shooting.hpp"

namespace mpa {

struct ObjectiveValues {
    double j1 = 0.0;
    double j2 = 0.0;
    double j3 = 0.0;

    friend bool operator==(const ObjectiveValues&, const ObjectiveValues&) = default;
};

/// Controlled transition between two trims, expressed in the frame where it
/// starts at the origin with zero heading.
struct Maneuver {
    int from = 0;
    int to = 0;
    Objective objective = Objective::J3;
    double duration = kStepDuration;
    std::vector<Input> controls;  ///< one per interval, zero-order hold
    std::vector<State> states;    ///< controls.size() + 1 grid states
    GroupElement displacement;    ///< end pose relative to the start
    ObjectiveValues costs;

    friend bool operator==(const Maneuver&, const Maneuver&) = default;
};

/// Quadrature of the running costs along the stored grid: trapezoidal in the
/// state-dependent term, exact interval sums in the zero-order-hold input term.
ObjectiveValues evaluate_objectives(const Maneuver& m);

/// Single-objective optima that fix the min-max normalization of J1 and J2.
struct Anchors {
    Maneuver j1_optimal;
    Maneuver j2_optimal;
    double j1_min = 0.0, j1_max = 0.0;
    double j2_min = 0.0, j2_max = 0.0;
};

Anchors compute_anchors(const ManeuverProblem& prob, const solver::SolverOptions& opts = {});

/// Minimizes w * J1_hat + (1 - w) * J2_hat over the controls, where the hats
/// denote min-max normalization by the anchors. w = 1 and w = 0 solve the pure
/// objectives directly. Throws InfeasibleError when the boundary pair cannot be
/// connected within the bounds and ConvergenceError on hitting the iteration cap.
Maneuver solve_scalarized(const ManeuverProblem& prob, double w, const solver::SolverOptions& opts = {});
Maneuver solve_scalarized(const ManeuverProblem& prob, double w, const Anchors& anchors,
                          const solver::SolverOptions& opts = {});

/// The named single-objective maneuver (w = 1, 0, 0.5 for J1, J2, J3).
Maneuver build_maneuver(const Trim& from, const Trim& to, Objective objective, const VehicleParams& params,
                        int intervals = 20);

/// Throws InfeasibleError naming the violated bound, if any.
void check_connectable(const ManeuverProblem& prob);

/// Maximum deviation of a maneuver from the RK4 recursion under its controls.
double dynamics_residual(const Maneuver& m, const VehicleParams& params);

/// Largest violation of the state and input box bounds over the grid.
double bound_violation(const Maneuver& m, const VehicleParams& params);

}  // namespace mpa
