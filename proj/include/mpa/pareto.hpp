#pragma once

#include <span>
#include <vector>

#include "mpa/maneuver_optimizer.hpp"

namespace mpa {

struct ObjectivePair {
    double j1 = 0.0;
    double j2 = 0.0;

    friend bool operator==(const ObjectivePair&, const ObjectivePair&) = default;
};

/// Indices of the points no other point dominates, sorted by (J1, J2, index).
/// Points equal in both coordinates within 1e-12 collapse to the first one.
std::vector<std::size_t> nondominated_indices(std::span<const ObjectivePair> points);

std::vector<ObjectivePair> nondominated_filter(std::span<const ObjectivePair> points);

struct ParetoPoint {
    double weight = 0.0;
    Maneuver maneuver;
    ObjectivePair objectives;
};

/// Solves one scalarization per weight and keeps the nondominated results,
/// sorted by J1. Weights that fail are skipped; if all fail the first error is
/// rethrown.
std::vector<ParetoPoint> sweep_pareto(const ManeuverProblem& prob, std::span<const double> weights,
                                      const solver::SolverOptions& opts = {});

/// n weights spaced uniformly on [0, 1].
std::vector<double> uniform_weights(int n);

}  // namespace mpa
