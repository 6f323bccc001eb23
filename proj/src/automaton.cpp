#include "mpa/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <tuple>
#include <sstream>

#include "mpa/errors.hpp"

namespace mpa {

namespace {

std::string edge_name(int from, int to, Objective o) {
    return trim_label(from) + "->" + trim_label(to) + " [" + std::string(to_string(o)) + "]";
}

}  // namespace

const TrimVertex* MotionPrimitiveAutomaton::find_trim(int id) const {
    for (const auto& t : trims) {
        if (t.trim.id == id) return &t;
    }
    return nullptr;
}

const Maneuver* MotionPrimitiveAutomaton::find_maneuver(int from, int to, Objective objective) const {
    for (const auto& m : maneuvers) {
        if (m.from == from && m.to == to && m.objective == objective) return &m;
    }
    return nullptr;
}

Connectivity default_connectivity() {
    Connectivity c;
    auto link = [&c](int a, int b) {
        c.emplace_back(a, b);
        c.emplace_back(b, a);
    };
    for (int hub : {2, 7, 12}) link(kStandstill, hub);
    for (int i = 2; i <= 11; ++i) link(i, i + 1);
    for (int i = 2; i <= 10; ++i) link(i, i + 2);
    return c;
}

PairOptimizer default_pair_optimizer(const VehicleParams& params, int intervals) {
    return [params, intervals](const Trim& from, const Trim& to, std::span<const Objective> objectives) {
        const ManeuverProblem prob{from, to, from.step_duration, intervals, params};
        const Anchors anchors = compute_anchors(prob);
        std::vector<Maneuver> out;
        for (Objective o : objectives) {
            switch (o) {
                case Objective::J1: out.push_back(anchors.j1_optimal); break;
                case Objective::J2: out.push_back(anchors.j2_optimal); break;
                case Objective::J3: out.push_back(solve_scalarized(prob, 0.5, anchors)); break;
            }
            out.back().objective = o;
        }
        return out;
    };
}

MotionPrimitiveAutomaton build_universal_automaton(std::span<const Trim> trims, std::span<const Objective> objectives,
                                                   const Connectivity& connectivity, const VehicleParams& params,
                                                   BuildLog* log) {
    return build_universal_automaton(trims, objectives, connectivity, params, default_pair_optimizer(params), log);
}

MotionPrimitiveAutomaton build_universal_automaton(std::span<const Trim> trims, std::span<const Objective> objectives,
                                                   const Connectivity& connectivity, const VehicleParams& params,
                                                   const PairOptimizer& optimizer, BuildLog* log) {
    validate(params);
    MotionPrimitiveAutomaton ua;
    ua.params = params;
    if (trims.empty()) throw ConfigError("build_universal_automaton: no trims given");
    ua.step_duration = trims.front().step_duration;
    for (const Trim& t : trims) {
        validate(t, params);
        if (ua.find_trim(t.id)) throw ConfigError("build_universal_automaton: duplicate " + trim_label(t.id));
        if (t.step_duration != ua.step_duration) {
            throw ConfigError("build_universal_automaton: trims disagree on step_duration");
        }
        ua.trims.push_back({t, trim_displacement(t, params)});
    }

    std::vector<std::pair<const Trim*, const Trim*>> pairs;
    for (const auto& [a, b] : connectivity) {
        const TrimVertex* from = ua.find_trim(a);
        const TrimVertex* to = ua.find_trim(b);
        if (!from || !to) continue;  // connectivity may mention trims outside this build
        if (a == b) throw ConfigError("connectivity: self pair " + trim_label(a) + " (self-loops are implicit)");
        if (std::find(pairs.begin(), pairs.end(), std::pair{&from->trim, &to->trim}) != pairs.end()) continue;
        pairs.emplace_back(&from->trim, &to->trim);
    }

    // Each pair is independent; results are gathered in connectivity order.
    std::vector<std::future<std::vector<Maneuver>>> jobs;
    jobs.reserve(pairs.size());
    for (const auto& [from, to] : pairs) {
        jobs.push_back(std::async(std::launch::async, [&optimizer, from, to, objectives] {
            return optimizer(*from, *to, objectives);
        }));
    }
    std::vector<std::string> failed;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const std::string name = trim_label(pairs[i].first->id) + "->" + trim_label(pairs[i].second->id);
        try {
            for (Maneuver& m : jobs[i].get()) ua.maneuvers.push_back(std::move(m));
        } catch (const InfeasibleError& e) {
            if (log) log->omitted.push_back(name + ": " + e.what());
        } catch (const std::exception& e) {
            failed.push_back(name + " (" + e.what() + ")");
        }
    }
    if (!failed.empty()) {
        std::ostringstream os;
        os << "maneuver optimization failed for " << failed.size() << " pair(s):";
        for (const auto& f : failed) os << "\n  " << f;
        throw BuildError(os.str());
    }
    return ua;
}

SubgraphConfig subgraph_preset(char name) {
    SubgraphConfig cfg;
    switch (name) {
        case 'A': cfg.objective = Objective::J1; break;
        case 'B': cfg.objective = Objective::J2; break;
        case 'C': cfg.objective = Objective::J3; break;
        case 'D':
            cfg.objective = Objective::J3;
            cfg.enabled_trims = {1, 2, 4, 6, 7, 8, 10, 12};
            return cfg;
        default: throw ConfigError(std::string("unknown subgraph preset '") + name + "' (expected A, B, C or D)");
    }
    for (int i = 1; i <= 12; ++i) cfg.enabled_trims.insert(i);
    return cfg;
}

SubgraphConfig subgraph_preset(std::string_view name) {
    if (name.size() != 1) throw ConfigError("unknown subgraph preset '" + std::string(name) + "'");
    return subgraph_preset(name.front());
}

MotionPrimitiveAutomaton configure_subgraph(const MotionPrimitiveAutomaton& ua, const SubgraphConfig& cfg) {
    if (cfg.enabled_trims.empty()) throw ConfigError("subgraph: enabled trim set is empty");
    if (!cfg.enabled_trims.contains(kStandstill)) {
        throw ConfigError("subgraph: the standstill trim " + trim_label(kStandstill) + " must stay enabled");
    }
    for (int id : cfg.enabled_trims) {
        if (!ua.find_trim(id)) throw ConfigError("subgraph: " + trim_label(id) + " is not in the automaton");
    }
    MotionPrimitiveAutomaton out;
    out.params = ua.params;
    out.step_duration = ua.step_duration;
    for (const auto& t : ua.trims) {
        if (cfg.enabled_trims.contains(t.trim.id)) out.trims.push_back(t);
    }
    for (const auto& m : ua.maneuvers) {
        if (m.objective == cfg.objective && cfg.enabled_trims.contains(m.from) && cfg.enabled_trims.contains(m.to)) {
            out.maneuvers.push_back(m);
        }
    }
    return out;
}

std::map<int, int> steps_to_standstill(const MotionPrimitiveAutomaton& a) {
    std::map<int, int> dist;
    if (!a.find_trim(kStandstill)) return dist;
    // breadth-first search on reversed edges
    std::deque<int> queue{kStandstill};
    dist[kStandstill] = 0;
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        for (const auto& m : a.maneuvers) {
            if (m.to == cur && !dist.contains(m.from) && a.find_trim(m.from)) {
                dist[m.from] = dist[cur] + 1;
                queue.push_back(m.from);
            }
        }
    }
    return dist;
}

ValidationReport validate_automaton(const MotionPrimitiveAutomaton& a) {
    ValidationReport rep;
    auto fail = [&rep](std::string msg) { rep.failures.push_back(std::move(msg)); };

    try {
        validate(a.params);
    } catch (const ConfigError& e) {
        fail(e.what());
    }
    std::set<int> ids;
    for (const auto& t : a.trims) {
        if (!ids.insert(t.trim.id).second) fail("duplicate trim " + trim_label(t.trim.id));
        try {
            validate(t.trim, a.params);
            const GroupElement expect = trim_displacement(t.trim, a.params);
            const double err = std::max({std::abs(expect.dx - t.self_loop.dx), std::abs(expect.dy - t.self_loop.dy),
                                         std::abs(expect.dpsi - t.self_loop.dpsi)});
            if (err > 1e-9) fail(trim_label(t.trim.id) + ": self-loop displacement differs from the trim flow");
        } catch (const std::exception& e) {
            fail(e.what());
        }
        if (t.trim.step_duration != a.step_duration) fail(trim_label(t.trim.id) + ": step_duration mismatch");
    }

    std::set<std::tuple<int, int, Objective>> keys;
    for (const auto& m : a.maneuvers) {
        EdgeReport er{m.from, m.to, m.objective};
        const std::string name = edge_name(m.from, m.to, m.objective);
        if (!keys.insert({m.from, m.to, m.objective}).second) fail(name + ": duplicate edge");
        const TrimVertex* from = a.find_trim(m.from);
        const TrimVertex* to = a.find_trim(m.to);
        if (!from || !to) {
            fail(name + ": endpoint trim missing");
            er.ok = false;
            rep.edges.push_back(er);
            continue;
        }
        if (m.controls.empty() || m.states.size() != m.controls.size() + 1) {
            fail(name + ": trajectory arrays have inconsistent lengths");
            er.ok = false;
            rep.edges.push_back(er);
            continue;
        }
        if (std::abs(m.duration - a.step_duration) > 1e-12) fail(name + ": duration differs from the step duration");
        try {
            er.dynamics_residual = dynamics_residual(m, a.params);
        } catch (const std::exception&) {
            er.dynamics_residual = std::numeric_limits<double>::infinity();
        }
        const State& s0 = m.states.front();
        const State& sn = m.states.back();
        er.boundary_residual = std::max({std::abs(s0.sx), std::abs(s0.sy), std::abs(s0.psi),
                                         std::abs(s0.v - from->trim.v), std::abs(s0.delta - from->trim.delta),
                                         std::abs(sn.v - to->trim.v), std::abs(sn.delta - to->trim.delta)});
        er.bound_violation = bound_violation(m, a.params);
        if (!(er.dynamics_residual <= 1e-9)) {
            fail(name + ": dynamics residual " + std::to_string(er.dynamics_residual));
            er.ok = false;
        }
        if (!(er.boundary_residual <= 1e-6)) {
            fail(name + ": boundary residual " + std::to_string(er.boundary_residual));
            er.ok = false;
        }
        if (!(er.bound_violation <= 1e-9)) {
            fail(name + ": bound violation " + std::to_string(er.bound_violation));
            er.ok = false;
        }
        if (!(m.displacement == pose_of(sn))) {
            fail(name + ": displacement does not match the final state");
            er.ok = false;
        }
        rep.edges.push_back(er);
    }

    rep.steps_to_standstill = steps_to_standstill(a);
    if (!a.find_trim(kStandstill)) {
        fail("standstill trim " + trim_label(kStandstill) + " missing");
    } else {
        for (const auto& t : a.trims) {
            if (!rep.steps_to_standstill.contains(t.trim.id)) {
                fail(trim_label(t.trim.id) + " cannot reach the standstill trim");
            }
        }
    }
    return rep;
}

}  // namespace mpa
