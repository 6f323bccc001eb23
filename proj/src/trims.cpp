#include "mpa/trims.hpp"

#include <array>
#include <cmath>

#include "mpa/errors.hpp"

namespace mpa {

namespace {

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

}  // namespace

std::string trim_label(int id) { return "pi" + std::to_string(id); }

std::vector<Trim> standard_trim_table() {
    constexpr std::array<double, 12> v = {0.0, 0.4, 0.5, 0.6, 0.7, 0.8, 0.8, 0.8, 0.7, 0.6, 0.5, 0.4};
    constexpr std::array<double, 12> delta = {0.0,   -0.60, -0.48, -0.36, -0.24, -0.12,
                                              0.0,   0.12,  0.24,  0.36,  0.48,  0.60};
    std::vector<Trim> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back({static_cast<int>(i + 1), v[i], delta[i], kStepDuration});
    }
    return out;
}

void validate(const Trim& tr, const VehicleParams& p) {
    const std::string who = trim_label(tr.id) + ": ";
    if (tr.id < 1) throw ConfigError(who + "id must be >= 1");
    if (tr.v < p.v_min || tr.v > p.v_max) throw ConfigError(who + "velocity outside [v_min, v_max]");
    if (std::abs(tr.delta) > p.delta_max) throw ConfigError(who + "steering exceeds delta_max");
    if (!(tr.step_duration > 0.0)) throw ConfigError(who + "step_duration must be > 0");
}

double trim_yaw_rate(const Trim& tr, const VehicleParams& p) {
    return tr.v / p.wheelbase * std::tan(tr.delta) * std::cos(sideslip_beta(tr.delta, p));
}

State trim_flow(const Trim& tr, double t, const VehicleParams& p) {
    if (t < 0.0) throw DomainError("trim_flow: t must be >= 0");
    const double beta = sideslip_beta(tr.delta, p);
    const double omega = trim_yaw_rate(tr, p);
    // Chord of the arc: length v*t*sinc(omega*t/2), direction beta + omega*t/2.
    const double half = 0.5 * omega * t;
    const double chord = tr.v * t * sinc(half);
    return {chord * std::cos(beta + half), chord * std::sin(beta + half), omega * t, tr.v, tr.delta};
}

GroupElement trim_displacement(const Trim& tr, const VehicleParams& p) {
    return pose_of(trim_flow(tr, tr.step_duration, p));
}

}  // namespace mpa
