#include "mpa/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mpa/errors.hpp"

namespace mpa {

namespace {

// Windowed projection bounds for progress tracking [m].
constexpr double kBehind = 0.1;
constexpr double kAhead = 0.4;

State state_at(const GroupElement& pose, const Trim& tr) { return {pose.dx, pose.dy, pose.dpsi, tr.v, tr.delta}; }

double wrapped_delta(double ds, double length) {
    ds = std::fmod(ds, length);
    if (ds > 0.5 * length) ds -= length;
    if (ds <= -0.5 * length) ds += length;
    return ds;
}

}  // namespace

PresetMap parse_preset_map(const std::string& text) {
    PresetMap out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
            throw ConfigError("preset map entry '" + item + "' is not of the form id=PRESET");
        }
        const std::string preset = item.substr(eq + 1);
        subgraph_preset(std::string_view(preset));
        out[item.substr(0, eq)] = preset;
    }
    return out;
}

ClosedLoop::ClosedLoop(const Scenario& scenario, const MotionPrimitiveAutomaton& ua, const PresetMap& presets)
    : scenario_(scenario) {
    validate(scenario_);
    for (const auto& [id, preset] : presets) {
        if (std::none_of(scenario_.vehicles.begin(), scenario_.vehicles.end(),
                         [&id](const VehicleSpec& v) { return v.id == id; })) {
            throw ConfigError("preset map names unknown vehicle '" + id + "'");
        }
    }
    const std::size_t n = scenario_.vehicles.size();
    graphs_.reserve(n);
    log_.step_duration = scenario_.step_duration;
    log_.safety_margin = scenario_.planner.safety_margin;
    log_.footprint_radius = ua.params.footprint_radius;
    for (const VehicleSpec& v : scenario_.vehicles) {
        auto it = presets.find(v.id);
        const std::string preset = it != presets.end() ? it->second : v.preset;
        graphs_.emplace_back(configure_subgraph(ua, subgraph_preset(std::string_view(preset))));
        if (std::abs(graphs_.back().step_duration() - scenario_.step_duration) > 1e-12) {
            throw ConfigError("automaton step duration differs from the scenario's");
        }
        if (!graphs_.back().has_trim(v.start_trim)) {
            throw ConfigError("vehicle '" + v.id + "': start " + trim_label(v.start_trim) + " is not in preset " +
                              preset);
        }
        log_.vehicles.push_back({v.id, v.color, preset, v.reference.length(),
                                 state_at(v.start_pose, graphs_.back().trim(v.start_trim)), {}});
        const double s0 = v.reference.nearest({v.start_pose.dx, v.start_pose.dy}).s;
        vehicles_.push_back({v.start_pose, v.start_trim, s0, s0, 0.0, std::nullopt});
    }
}

std::vector<std::vector<Vec2>> ClosedLoop::targets() const {
    std::vector<std::vector<Vec2>> out;
    const int t = static_cast<int>(log_.vehicles.front().steps.size());
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
        const VehicleSpec& v = scenario_.vehicles[i];
        std::vector<Vec2> tg;
        // time-indexed: the reference point advances at the nominal speed
        for (int k = 1; k <= scenario_.planner.horizon; ++k) {
            tg.push_back(v.reference.point_at(vehicles_[i].s_start + v.nominal_speed * scenario_.step_duration * (t + k)));
        }
        out.push_back(std::move(tg));
    }
    return out;
}

void ClosedLoop::step() {
    const std::size_t n = vehicles_.size();
    const auto tg = targets();
    std::vector<VehicleRequest> req(n);
    for (std::size_t i = 0; i < n; ++i) {
        req[i] = {&graphs_[i], vehicles_[i].pose, vehicles_[i].trim, tg[i], vehicles_[i].previous};
    }
    last_ = prioritized_step(req, scenario_.planner);
    const int t = static_cast<int>(log_.vehicles.front().steps.size()) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        const VehicleSpec& v = scenario_.vehicles[i];
        VehicleState& vs = vehicles_[i];
        const VehicleOutcome& out = last_[i];
        const PlanStep& st = out.plan.steps.front();
        vs.pose = st.pose;
        vs.trim = st.to;
        vs.previous = out.plan;
        const Vec2 p{vs.pose.dx, vs.pose.dy};
        const double s_new = v.reference.nearest_near(p, vs.s_track, kBehind, kAhead).s;
        vs.progress += wrapped_delta(s_new - vs.s_track, v.reference.length());
        vs.s_track = s_new;
        const auto near = v.reference.nearest(p);

        StepRecord rec;
        rec.step = t;
        rec.trim_from = st.from;
        rec.trim_to = st.to;
        rec.objective = st.objective;
        rec.state = state_at(vs.pose, graphs_[i].trim(vs.trim));
        rec.reference_point = near.point;
        rec.deviation = near.distance;
        rec.progress = vs.progress;
        rec.expanded = out.stats.expanded;
        rec.generated = out.stats.generated;
        rec.wall_ms = out.stats.wall_ms;
        rec.status = out.status;
        rec.fallback = out.fallback;
        log_.vehicles[i].steps.push_back(rec);
    }
}

RunLog run_scenario(const Scenario& scenario, const MotionPrimitiveAutomaton& ua, const PresetMap& presets) {
    ClosedLoop loop(scenario, ua, presets);
    for (int t = 0; t < scenario.steps; ++t) loop.step();
    return loop.log();
}

namespace {

struct StepSamples {
    Vec2 mid;
    Vec2 end;
};

// Midpoint and end of every logged step, rebuilt from the stored primitives.
std::vector<StepSamples> samples_of(const VehicleLog& v, const MotionPrimitiveAutomaton& ua) {
    std::vector<StepSamples> out;
    GroupElement pose = pose_of(v.start);
    for (const StepRecord& r : v.steps) {
        GroupElement mid_rel;
        if (r.trim_from == r.trim_to) {
            const TrimVertex* tv = ua.find_trim(r.trim_from);
            if (!tv) throw InvariantError("log refers to an unknown trim");
            mid_rel = pose_of(trim_flow(tv->trim, 0.5 * tv->trim.step_duration, ua.params));
        } else {
            const Maneuver* m = ua.find_maneuver(r.trim_from, r.trim_to, r.objective);
            if (!m) throw InvariantError("log refers to an unknown maneuver");
            mid_rel = pose_of(m->states[m->states.size() / 2]);
        }
        const GroupElement mid = compose_group(pose, mid_rel);
        out.push_back({{mid.dx, mid.dy}, {r.state.sx, r.state.sy}});
        pose = pose_of(r.state);
    }
    return out;
}

}  // namespace

SafetyAudit audit_safety(const RunLog& log, const MotionPrimitiveAutomaton& ua) {
    SafetyAudit audit;
    audit.min_clearance = std::numeric_limits<double>::infinity();
    std::vector<std::vector<StepSamples>> samples;
    for (const auto& v : log.vehicles) samples.push_back(samples_of(v, ua));
    const double need = 2 * log.footprint_radius + log.safety_margin;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            const std::size_t T = std::min(samples[i].size(), samples[j].size());
            for (std::size_t t = 0; t < T; ++t) {
                for (const auto& [a, b] : {std::pair{samples[i][t].mid, samples[j][t].mid},
                                          std::pair{samples[i][t].end, samples[j][t].end}}) {
                    const double clearance = distance(a, b) - need;
                    ++audit.checks;
                    if (clearance < 0) ++audit.violations;
                    audit.min_clearance = std::min(audit.min_clearance, clearance);
                }
            }
        }
    }
    return audit;
}

double replay_error(const RunLog& log, const MotionPrimitiveAutomaton& ua) {
    double worst = 0.0;
    for (const auto& v : log.vehicles) {
        State x = v.start;
        for (const StepRecord& r : v.steps) {
            if (r.trim_from == r.trim_to) {
                x = integrate(x, Input{}, log.step_duration, 10, ua.params);
            } else {
                const Maneuver* m = ua.find_maneuver(r.trim_from, r.trim_to, r.objective);
                if (!m) throw InvariantError("log refers to an unknown maneuver");
                const double h = m->duration / static_cast<double>(m->controls.size());
                for (const Input& u : m->controls) x = integrate_step(x, u, h, ua.params);
            }
            const StateVector a = to_vector(x);
            const StateVector b = to_vector(r.state);
            for (int k = 0; k < 5; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
            x = r.state;  // re-anchor so errors do not accumulate across steps
        }
    }
    return worst;
}

}  // namespace mpa
