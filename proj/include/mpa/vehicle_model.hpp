#pragma once

#include <array>
#include <numbers>

namespace mpa {

/// Kinematic single-track state. `psi` is accumulated, never wrapped.
struct State {
    double sx = 0.0;     ///< CG position x [m]
    double sy = 0.0;     ///< CG position y [m]
    double psi = 0.0;    ///< heading [rad]
    double v = 0.0;      ///< longitudinal velocity [m/s]
    double delta = 0.0;  ///< steering angle [rad]

    friend bool operator==(const State&, const State&) = default;
};

struct Input {
    double accel = 0.0;       ///< longitudinal acceleration [m/s^2]
    double steer_rate = 0.0;  ///< steering angle rate [rad/s]

    friend bool operator==(const Input&, const Input&) = default;
};

using StateVector = std::array<double, 5>;

StateVector to_vector(const State& x);
State from_vector(const StateVector& a);

/// Vehicle geometry and actuator limits.
///
/// The defaults describe a 1:18 model car; they are configuration values and
/// not measured parameters of any particular vehicle.
struct VehicleParams {
    double wheelbase = 0.15;         ///< L [m]
    double rear_to_cg = 0.075;       ///< l_r [m]
    double v_min = 0.0;              ///< [m/s]
    double v_max = 0.8;              ///< [m/s]
    double delta_max = 0.62;         ///< [rad]
    double accel_max = 8.0;          ///< |u_vdot| bound [m/s^2]
    double steer_rate_max = 10.0;    ///< |u_deltadot| bound [rad/s]
    double footprint_radius = 0.06;  ///< collision disc radius [m]

    friend bool operator==(const VehicleParams&, const VehicleParams&) = default;
};

/// Throws ConfigError unless the parameter invariants hold.
void validate(const VehicleParams& p);

double sideslip_beta(double delta, const VehicleParams& p);

/// Right-hand side of the kinematic single-track model.
StateVector eval_dynamics(const State& x, const Input& u, const VehicleParams& p);

/// Jacobian of eval_dynamics with respect to the state, row-major 5x5.
/// The input Jacobian is constant (rows 4 and 5 are the identity).
std::array<double, 25> dynamics_state_jacobian(const State& x, const VehicleParams& p);

/// One classical RK4 step of size dt with the input held constant.
State integrate_step(const State& x, const Input& u, double dt, const VehicleParams& p);

/// `substeps` RK4 steps covering `duration` under a constant input.
State integrate(const State& x, const Input& u, double duration, int substeps, const VehicleParams& p);

/// Maps an angle to (-pi, pi].
double normalize_angle(double a);

/// Planar rigid motion (translation + rotation) acting on vehicle states.
struct GroupElement {
    double dx = 0.0;
    double dy = 0.0;
    double dpsi = 0.0;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// Rotates the position by dpsi, translates by (dx, dy) and adds dpsi to the
/// heading. Velocity and steering are untouched.
State apply_group(const GroupElement& g, const State& x);

/// apply_group(compose(a, b), x) == apply_group(a, apply_group(b, x)).
GroupElement compose_group(const GroupElement& a, const GroupElement& b);
GroupElement invert_group(const GroupElement& g);

/// The pose part of a state viewed as a group element.
inline GroupElement pose_of(const State& x) { return {x.sx, x.sy, x.psi}; }

}  // namespace mpa
