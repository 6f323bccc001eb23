#pragma once

#include <span>
#include <vector>

#include "mpa/trims.hpp"
#include "mpa/vehicle_model.hpp"

namespace mpa {

/// Fixed-duration maneuver between two trims.
///
/// The boundary map pins the start to (0, 0, 0, v_from, delta_from) and the
/// end (v, delta) to the target trim; end position and heading are free.
struct ManeuverProblem {
    Trim from;
    Trim to;
    double duration = kStepDuration;
    int intervals = 20;
    VehicleParams params;
};

/// Single-shooting transcription with zero-order-hold controls and one RK4
/// step per control interval.
///
/// The decision vector interleaves the channels: [a_0, r_0, a_1, r_1, ...]
/// with a = longitudinal acceleration and r = steering rate.
class ShootingTranscription {
public:
    explicit ShootingTranscription(ManeuverProblem prob);

    const ManeuverProblem& problem() const { return prob_; }
    int intervals() const { return prob_.intervals; }
    std::size_t num_variables() const { return 2 * static_cast<std::size_t>(prob_.intervals); }
    double interval() const { return prob_.duration / prob_.intervals; }

    State initial_state() const;
    std::vector<State> rollout(std::span<const double> u) const;

    /// Constant controls that meet the terminal (v, delta) exactly.
    std::vector<double> initial_guess() const;
    std::vector<double> lower_bounds() const;
    std::vector<double> upper_bounds() const;

    /// J1 = -integral(sx^2 + sy^2), trapezoidal on the state grid.
    /// Fills `grad` (may be empty) by reverse-mode differentiation through RK4.
    double j1(std::span<const double> u, std::span<double> grad) const;

    /// J2 = integral(|u|^2); exact for zero-order-hold controls.
    double j2(std::span<const double> u, std::span<double> grad) const;

    static constexpr std::size_t kNumEq = 2;
    std::size_t num_ineq() const { return 4 * static_cast<std::size_t>(prob_.intervals - 1); }

    /// Stacked [terminal equalities; path bounds <= 0] and row-major Jacobian.
    /// Equalities: v_N - v_to, delta_N - delta_to. Inequalities per interior
    /// node k: v_k - v_max, v_min - v_k, delta_k - delta_max, -delta_max - delta_k.
    void constraints(std::span<const double> u, std::span<double> c, std::span<double> jac) const;

private:
    ManeuverProblem prob_;
};

/// Vector-Jacobian product of one RK4 step: given the adjoint of the output
/// state, accumulates the adjoints of the input state and the input.
void rk4_step_vjp(const State& x, const Input& u, double h, const VehicleParams& p, const StateVector& out_adj,
                  StateVector& x_adj, Input& u_adj);

}  // namespace mpa
