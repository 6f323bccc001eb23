#include "mpa/running_cost.hpp"

#include "mpa/errors.hpp"

namespace mpa {

std::string_view to_string(Objective o) {
    switch (o) {
        case Objective::J1: return "J1";
        case Objective::J2: return "J2";
        case Objective::J3: return "J3";
    }
    return "?";
}

Objective parse_objective(std::string_view s) {
    if (s == "J1") return Objective::J1;
    if (s == "J2") return Objective::J2;
    if (s == "J3") return Objective::J3;
    throw ConfigError("unknown objective label '" + std::string(s) + "' (expected J1, J2 or J3)");
}

}  // namespace mpa
