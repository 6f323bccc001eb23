#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mpa::solver {

/// Smooth problem  min f(x)  s.t.  c_eq(x) = 0,  c_in(x) <= 0,  lower <= x <= upper.
///
/// `constraints` fills the stacked vector [c_eq; c_in] and its row-major
/// Jacobian (num_eq + num_ineq rows, x.size() columns).
struct ConstrainedProblem {
    std::vector<double> lower;
    std::vector<double> upper;
    std::size_t num_eq = 0;
    std::size_t num_ineq = 0;
    std::function<double(std::span<const double> x, std::span<double> grad)> objective;
    std::function<void(std::span<const double> x, std::span<double> c, std::span<double> jac)> constraints;
};

struct SolverOptions {
    int max_outer = 50;
    int max_inner = 500;  ///< spectral projected-gradient iterations per subproblem
    double feasibility_tol = 1e-10;
    double optimality_tol = 1e-6;
    double initial_penalty = 10.0;
    double penalty_growth = 10.0;
    double max_penalty = 1e12;
};

struct SolverResult {
    std::vector<double> x;
    double objective = 0.0;
    double max_violation = 0.0;
    double stationarity = 0.0;  ///< inf-norm of the projected Lagrangian gradient
    int outer_iterations = 0;
    int inner_iterations = 0;
    bool converged = false;
};

/// Projection of x onto the box [lower, upper].
void project_box(std::span<double> x, std::span<const double> lower, std::span<const double> upper);

/// Augmented Lagrangian outer loop (Powell-Hestenes-Rockafellar multipliers)
/// around a nonmonotone spectral projected-gradient inner solver that keeps
/// every iterate inside the box. Deterministic for a fixed x0.
SolverResult solve_augmented_lagrangian(const ConstrainedProblem& prob, std::vector<double> x0,
                                        const SolverOptions& opts = {});

}  // namespace mpa::solver
