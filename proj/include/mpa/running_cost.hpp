#pragma once

#include <string>
#include <string_view>

#include "mpa/vehicle_model.hpp"

namespace mpa {

/// Objective labels: J1 rewards distance from the start, J2 penalizes input
/// energy, J3 is their equal-weight blend.
enum class Objective { J1, J2, J3 };

std::string_view to_string(Objective o);

/// Parses "J1" | "J2" | "J3"; throws ConfigError otherwise.
Objective parse_objective(std::string_view s);

/// Running cost of an objective, evaluated in the maneuver-local frame where
/// every maneuver starts at the origin with zero heading.
class RunningCost {
public:
    explicit RunningCost(Objective id) : id_(id) {}

    Objective id() const { return id_; }

    double operator()(const State& x, const Input& u) const {
        const double l1 = -(x.sx * x.sx + x.sy * x.sy);
        const double l2 = u.accel * u.accel + u.steer_rate * u.steer_rate;
        switch (id_) {
            case Objective::J1: return l1;
            case Objective::J2: return l2;
            case Objective::J3: return 0.5 * l1 + 0.5 * l2;
        }
        return 0.0;
    }

private:
    Objective id_;
};

}  // namespace mpa
