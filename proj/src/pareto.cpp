#include "mpa/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "mpa/errors.hpp"

namespace mpa {

namespace {

constexpr double kSameTol = 1e-12;

bool same(const ObjectivePair& a, const ObjectivePair& b) {
    return std::abs(a.j1 - b.j1) <= kSameTol && std::abs(a.j2 - b.j2) <= kSameTol;
}

bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
    return a.j1 <= b.j1 && a.j2 <= b.j2 && (a.j1 < b.j1 || a.j2 < b.j2);
}

}  // namespace

std::vector<std::size_t> nondominated_indices(std::span<const ObjectivePair> points) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < points.size() && !drop; ++j) {
            if (j == i) continue;
            if (same(points[j], points[i])) {
                drop = j < i;
            } else {
                drop = dominates(points[j], points[i]);
            }
        }
        if (!drop) kept.push_back(i);
    }
    std::stable_sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].j1 != points[b].j1) return points[a].j1 < points[b].j1;
        return points[a].j2 < points[b].j2;
    });
    return kept;
}

std::vector<ObjectivePair> nondominated_filter(std::span<const ObjectivePair> points) {
    std::vector<ObjectivePair> out;
    for (std::size_t i : nondominated_indices(points)) out.push_back(points[i]);
    return out;
}

std::vector<double> uniform_weights(int n) {
    if (n < 1) throw DomainError("uniform_weights: n must be >= 1");
    if (n == 1) return {0.5};
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = static_cast<double>(i) / (n - 1);
    return w;
}

std::vector<ParetoPoint> sweep_pareto(const ManeuverProblem& prob, std::span<const double> weights,
                                      const solver::SolverOptions& opts) {
    if (weights.empty()) throw DomainError("sweep_pareto: no weights given");
    for (double w : weights) {
        if (!(w >= 0.0 && w <= 1.0)) throw DomainError("sweep_pareto: weights must lie in [0, 1]");
    }
    // Ascending weight order so that duplicates resolve to the lower weight.
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });

    const Anchors anchors = compute_anchors(prob, opts);
    std::vector<ParetoPoint> candidates;
    std::exception_ptr first_error;
    for (std::size_t idx : order) {
        try {
            ParetoPoint pt;
            pt.weight = weights[idx];
            pt.maneuver = solve_scalarized(prob, pt.weight, anchors, opts);
            pt.objectives = {pt.maneuver.costs.j1, pt.maneuver.costs.j2};
            candidates.push_back(std::move(pt));
        } catch (const ConvergenceError&) {
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (candidates.empty()) std::rethrow_exception(first_error);

    std::vector<ObjectivePair> objs;
    objs.reserve(candidates.size());
    for (const auto& c : candidates) objs.push_back(c.objectives);
    std::vector<ParetoPoint> front;
    for (std::size_t i : nondominated_indices(objs)) front.push_back(candidates[i]);
    return front;
}

}  // namespace mpa
