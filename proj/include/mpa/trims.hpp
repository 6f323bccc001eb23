#pragma once

#include <string>
#include <vector>

#include "mpa/vehicle_model.hpp"

namespace mpa {

/// Planning step length shared by trims and maneuvers [s].
inline constexpr double kStepDuration = 0.2;

/// Trim id of the standstill trim.
inline constexpr int kStandstill = 1;

/// Steady motion with zero input: a straight line or a circular arc.
struct Trim {
    int id = 0;                            ///< 1-based, printed as "pi<id>"
    double v = 0.0;                        ///< [m/s]
    double delta = 0.0;                    ///< [rad]
    double step_duration = kStepDuration;  ///< [s]

    friend bool operator==(const Trim&, const Trim&) = default;
};

std::string trim_label(int id);

/// The twelve trims of the universal automaton, ids 1..12.
std::vector<Trim> standard_trim_table();

/// Throws ConfigError if the trim violates the vehicle bounds.
void validate(const Trim& tr, const VehicleParams& p);

/// Yaw rate of a trim.
double trim_yaw_rate(const Trim& tr, const VehicleParams& p);

/// Closed-form flow from the frame-origin state (0, 0, 0, v, delta).
State trim_flow(const Trim& tr, double t, const VehicleParams& p);

/// Pose reached after one step_duration, as the self-loop edge of the trim.
GroupElement trim_displacement(const Trim& tr, const VehicleParams& p);

/// Cost of holding a trim for T seconds: T * ell(start state, zero input).
template <class Cost>
double unit_cost(const Trim& tr, const Cost& ell, double T, const VehicleParams& p) {
    return T * ell(trim_flow(tr, 0.0, p), Input{});
}

}  // namespace mpa
