#include "mpa/maneuver_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "mpa/errors.hpp"

namespace mpa {

namespace {

constexpr double kBoundSlack = 1e-12;

std::string pair_name(const ManeuverProblem& prob) {
    return trim_label(prob.from.id) + "->" + trim_label(prob.to.id);
}

double gradient_scale(const std::function<double(std::span<const double>, std::span<double>)>& f,
                      const std::vector<double>& x0) {
    std::vector<double> g(x0.size());
    f(x0, g);
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return 1.0 / std::max(m, 1e-8);
}

Maneuver make_maneuver(const ShootingTranscription& tr, std::span<const double> u, Objective label) {
    Maneuver m;
    m.from = tr.problem().from.id;
    m.to = tr.problem().to.id;
    m.objective = label;
    m.duration = tr.problem().duration;
    m.controls.reserve(tr.intervals());
    for (int k = 0; k < tr.intervals(); ++k) m.controls.push_back({u[2 * k], u[2 * k + 1]});
    m.states = tr.rollout(u);
    m.displacement = pose_of(m.states.back());
    m.costs = evaluate_objectives(m);
    return m;
}

using ObjectiveFn = std::function<double(std::span<const double>, std::span<double>)>;

std::vector<double> run_solver(const ShootingTranscription& tr, const ObjectiveFn& objective,
                               const solver::SolverOptions& opts, const std::string& what) {
    solver::ConstrainedProblem nlp;
    nlp.lower = tr.lower_bounds();
    nlp.upper = tr.upper_bounds();
    nlp.num_eq = ShootingTranscription::kNumEq;
    nlp.num_ineq = tr.num_ineq();
    nlp.objective = objective;
    nlp.constraints = [&tr](std::span<const double> u, std::span<double> c, std::span<double> jac) {
        tr.constraints(u, c, jac);
    };
    solver::SolverResult res = solver::solve_augmented_lagrangian(nlp, tr.initial_guess(), opts);
    if (!res.converged) {
        std::ostringstream os;
        os << what << ": no convergence after " << res.outer_iterations << " outer / " << res.inner_iterations
           << " inner iterations (violation " << res.max_violation << ", stationarity " << res.stationarity << ")";
        throw ConvergenceError(os.str(), std::move(res.x));
    }
    return res.x;
}

Maneuver solve_pure(const ManeuverProblem& prob, Objective which, const solver::SolverOptions& opts) {
    const ShootingTranscription tr(prob);
    ObjectiveFn raw = which == Objective::J1
                          ? ObjectiveFn([&tr](std::span<const double> u, std::span<double> g) { return tr.j1(u, g); })
                          : ObjectiveFn([&tr](std::span<const double> u, std::span<double> g) { return tr.j2(u, g); });
    const double scale = gradient_scale(raw, tr.initial_guess());
    ObjectiveFn scaled = [&raw, scale](std::span<const double> u, std::span<double> g) {
        const double v = raw(u, g);
        for (double& gi : g) gi *= scale;
        return scale * v;
    };
    const auto u = run_solver(tr, scaled, opts, pair_name(prob) + " " + std::string(to_string(which)));
    return make_maneuver(tr, u, which);
}

double normalizer(double lo, double hi) {
    const double range = hi - lo;
    return range > 1e-12 * (1.0 + std::abs(lo)) ? range : 1.0;
}

}  // namespace

ObjectiveValues evaluate_objectives(const Maneuver& m) {
    ObjectiveValues out;
    const std::size_t n = m.controls.size();
    if (n == 0) return out;
    const double h = m.duration / static_cast<double>(n);
    for (std::size_t k = 0; k <= n; ++k) {
        const double w = (k == 0 || k == n) ? 0.5 * h : h;
        out.j1 -= w * (m.states[k].sx * m.states[k].sx + m.states[k].sy * m.states[k].sy);
    }
    for (const Input& u : m.controls) out.j2 += h * (u.accel * u.accel + u.steer_rate * u.steer_rate);
    out.j3 = 0.5 * out.j1 + 0.5 * out.j2;
    return out;
}

void check_connectable(const ManeuverProblem& prob) {
    const VehicleParams& p = prob.params;
    const std::string who = pair_name(prob) + ": ";
    for (const Trim* t : {&prob.from, &prob.to}) {
        if (t->v < p.v_min - kBoundSlack || t->v > p.v_max + kBoundSlack) {
            throw InfeasibleError(who + trim_label(t->id) + " velocity violates [v_min, v_max]");
        }
        if (std::abs(t->delta) > p.delta_max + kBoundSlack) {
            throw InfeasibleError(who + trim_label(t->id) + " steering violates delta_max");
        }
    }
    if (std::abs(prob.to.v - prob.from.v) > p.accel_max * prob.duration + kBoundSlack) {
        throw InfeasibleError(who + "velocity change exceeds accel_max * T");
    }
    if (std::abs(prob.to.delta - prob.from.delta) > p.steer_rate_max * prob.duration + kBoundSlack) {
        throw InfeasibleError(who + "steering change exceeds steer_rate_max * T");
    }
}

Anchors compute_anchors(const ManeuverProblem& prob, const solver::SolverOptions& opts) {
    check_connectable(prob);
    Anchors a;
    a.j1_optimal = solve_pure(prob, Objective::J1, opts);
    a.j2_optimal = solve_pure(prob, Objective::J2, opts);
    a.j1_min = a.j1_optimal.costs.j1;
    a.j1_max = a.j2_optimal.costs.j1;
    a.j2_min = a.j2_optimal.costs.j2;
    a.j2_max = a.j1_optimal.costs.j2;
    return a;
}

Maneuver solve_scalarized(const ManeuverProblem& prob, double w, const solver::SolverOptions& opts) {
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("solve_scalarized: weight must lie in [0, 1]");
    check_connectable(prob);
    if (w == 1.0) return solve_pure(prob, Objective::J1, opts);
    if (w == 0.0) return solve_pure(prob, Objective::J2, opts);
    return solve_scalarized(prob, w, compute_anchors(prob, opts), opts);
}

Maneuver solve_scalarized(const ManeuverProblem& prob, double w, const Anchors& anchors,
                          const solver::SolverOptions& opts) {
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("solve_scalarized: weight must lie in [0, 1]");
    check_connectable(prob);
    if (w == 1.0) return solve_pure(prob, Objective::J1, opts);
    if (w == 0.0) return solve_pure(prob, Objective::J2, opts);

    const ShootingTranscription tr(prob);
    const double r1 = normalizer(anchors.j1_min, anchors.j1_max);
    const double r2 = normalizer(anchors.j2_min, anchors.j2_max);
    std::vector<double> g2(tr.num_variables());
    ObjectiveFn blended = [&](std::span<const double> u, std::span<double> g) {
        const double v1 = tr.j1(u, g);
        const double v2 = tr.j2(u, g2);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = w * g[i] / r1 + (1.0 - w) * g2[i] / r2;
        return w * (v1 - anchors.j1_min) / r1 + (1.0 - w) * (v2 - anchors.j2_min) / r2;
    };
    std::ostringstream what;
    what << pair_name(prob) << " w=" << w;
    const auto u = run_solver(tr, blended, opts, what.str());
    return make_maneuver(tr, u, Objective::J3);
}

Maneuver build_maneuver(const Trim& from, const Trim& to, Objective objective, const VehicleParams& params,
                        int intervals) {
    ManeuverProblem prob{from, to, kStepDuration, intervals, params};
    switch (objective) {
        case Objective::J1: return solve_scalarized(prob, 1.0);
        case Objective::J2: return solve_scalarized(prob, 0.0);
        case Objective::J3: break;
    }
    Maneuver m = solve_scalarized(prob, 0.5);
    m.objective = Objective::J3;
    return m;
}

double dynamics_residual(const Maneuver& m, const VehicleParams& params) {
    if (m.states.size() != m.controls.size() + 1) return std::numeric_limits<double>::infinity();
    const double h = m.duration / static_cast<double>(m.controls.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < m.controls.size(); ++k) {
        const StateVector expect = to_vector(integrate_step(m.states[k], m.controls[k], h, params));
        const StateVector got = to_vector(m.states[k + 1]);
        for (std::size_t i = 0; i < 5; ++i) worst = std::max(worst, std::abs(expect[i] - got[i]));
    }
    return worst;
}

double bound_violation(const Maneuver& m, const VehicleParams& p) {
    double worst = 0.0;
    for (const State& x : m.states) {
        worst = std::max({worst, x.v - p.v_max, p.v_min - x.v, std::abs(x.delta) - p.delta_max});
    }
    for (const Input& u : m.controls) {
        worst = std::max({worst, std::abs(u.accel) - p.accel_max, std::abs(u.steer_rate) - p.steer_rate_max});
    }
    return std::max(worst, 0.0);
}

}  // namespace mpa
