#include "mpa/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "mpa/errors.hpp"

namespace mpa {

namespace {

constexpr double kPosQuantum = 1e-3;                             // m
constexpr double kAngleQuantum = 0.5 * std::numbers::pi / 180;  // rad
constexpr int kSubsteps = 10;

GroupElement midpoint_of(const Maneuver& m) {
    const State& s = m.states[m.states.size() / 2];
    return pose_of(s);
}

}  // namespace

PrimitiveGraph::PrimitiveGraph(MotionPrimitiveAutomaton a) : a_(std::move(a)) {
    const ValidationReport rep = validate_automaton(a_);
    if (!rep.ok()) {
        std::ostringstream os;
        os << "automaton is not plannable:";
        for (const auto& f : rep.failures) os << "\n  " << f;
        throw ConfigError(os.str());
    }
    for (const auto& t : a_.trims) ids_.push_back(t.trim.id);
    out_.resize(ids_.size());
    for (std::size_t i = 0; i < a_.trims.size(); ++i) {
        const Trim& tr = a_.trims[i].trim;
        out_[i].push_back({tr.id, tr.id, Objective::J3, a_.trims[i].self_loop,
                           pose_of(trim_flow(tr, 0.5 * tr.step_duration, a_.params)), -1});
    }
    for (std::size_t k = 0; k < a_.maneuvers.size(); ++k) {
        const Maneuver& m = a_.maneuvers[k];
        out_[index(m.from)].push_back({m.from, m.to, m.objective, m.displacement, midpoint_of(m), static_cast<int>(k)});
    }
    for (auto& edges : out_) {
        // self-loops take the label of the edges around them
        if (edges.size() > 1) edges.front().objective = edges[1].objective;
        for (const auto& e : edges) max_step_distance_ = std::max(max_step_distance_, std::hypot(e.displacement.dx, e.displacement.dy));
    }
    // route: first edge toward a trim one step closer to standstill
    route_.assign(ids_.size(), -1);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (ids_[i] == kStandstill) {
            route_[i] = 0;
            continue;
        }
        const int d = rep.steps_to_standstill.at(ids_[i]);
        for (std::size_t e = 1; e < out_[i].size(); ++e) {
            auto it = rep.steps_to_standstill.find(out_[i][e].to);
            if (it != rep.steps_to_standstill.end() && it->second == d - 1) {
                route_[i] = static_cast<int>(e);
                break;
            }
        }
    }
}

std::size_t PrimitiveGraph::index(int id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (ids_[i] == id) return i;
    }
    throw ConfigError(trim_label(id) + " is not in the automaton");
}

bool PrimitiveGraph::has_trim(int id) const { return std::find(ids_.begin(), ids_.end(), id) != ids_.end(); }

const Trim& PrimitiveGraph::trim(int id) const { return a_.trims[index(id)].trim; }

std::span<const Primitive> PrimitiveGraph::outgoing(int trim_id) const { return out_[index(trim_id)]; }

bool PrimitiveGraph::reaches_standstill(int trim_id) const { return has_trim(trim_id) && route_[index(trim_id)] >= 0; }

const Primitive& PrimitiveGraph::route_to_standstill(int trim_id) const {
    const std::size_t i = index(trim_id);
    if (route_[i] < 0) throw InvariantError(trim_label(trim_id) + " has no route to standstill");
    return out_[i][route_[i]];
}

void validate(const PlannerConfig& cfg) {
    if (cfg.horizon < 1) throw ConfigError("planner horizon must be at least 1");
    if (!(cfg.heuristic_weight >= 0)) throw ConfigError("planner heuristic_weight must be non-negative");
    if (!(cfg.safety_margin >= 0)) throw ConfigError("planner safety_margin must be non-negative");
    if (cfg.expansion_cap == 0) throw ConfigError("planner expansion_cap must be positive");
}

std::vector<Disc> Plan::occupancy(double radius) const {
    std::vector<Disc> out;
    out.reserve(2 * steps.size());
    for (const auto& s : steps) {
        out.push_back({s.midpoint, radius});
        out.push_back({{s.pose.dx, s.pose.dy}, radius});
    }
    return out;
}

std::string_view to_string(PlanStatus s) {
    switch (s) {
        case PlanStatus::Ok: return "ok";
        case PlanStatus::Infeasible: return "infeasible";
        case PlanStatus::CapExceeded: return "cap_exceeded";
    }
    return "?";
}

double stage_cost(const GroupElement& pose, Vec2 target) {
    const double dx = pose.dx - target.x;
    const double dy = pose.dy - target.y;
    return dx * dx + dy * dy;
}

bool collision_free(const Disc& self, std::span<const Disc> obstacles, double margin) {
    for (const Disc& o : obstacles) {
        if (distance(self.center, o.center) < self.radius + o.radius + margin) return false;
    }
    return true;
}

PlanStep apply_primitive(const Primitive& prim, const GroupElement& pose) {
    const GroupElement end = compose_group(pose, prim.displacement);
    const GroupElement mid = compose_group(pose, prim.midpoint);
    return {prim.from, prim.to, prim.objective, end, {mid.dx, mid.dy}};
}

namespace {

struct Key {
    int step;
    int trim;
    long long qx;
    long long qy;
    int qpsi;

    friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
        std::size_t h = std::hash<long long>{}(k.qx);
        auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(std::hash<long long>{}(k.qy));
        mix(std::hash<int>{}(k.qpsi));
        mix(std::hash<int>{}(k.trim));
        mix(std::hash<int>{}(k.step));
        return h;
    }
};

Key make_key(int step, int trim, const GroupElement& pose) {
    const int turns = static_cast<int>(std::lround(2 * std::numbers::pi / kAngleQuantum));
    int qpsi = static_cast<int>(std::lround(normalize_angle(pose.dpsi) / kAngleQuantum)) % turns;
    if (qpsi < 0) qpsi += turns;
    return {step, trim, std::llround(pose.dx / kPosQuantum), std::llround(pose.dy / kPosQuantum), qpsi};
}

struct Node {
    GroupElement pose;
    int trim;
    int step;
    double g;
    int parent;
    const Primitive* via;
    bool closed;
};

struct OpenEntry {
    double f;
    std::size_t seq;
    int node;

    bool operator>(const OpenEntry& o) const { return f != o.f ? f > o.f : seq > o.seq; }
};

double heuristic(const GroupElement& pose, int step, std::span<const Vec2> targets, double reach) {
    double h = 0.0;
    for (std::size_t j = step; j < targets.size(); ++j) {
        const double d = std::hypot(pose.dx - targets[j].x, pose.dy - targets[j].y) - (j + 1 - step) * reach;
        if (d > 0) h += d * d;
    }
    return h;
}

}  // namespace

PlanResult plan_horizon(const PrimitiveGraph& graph, const GroupElement& start_pose, int start_trim,
                        std::span<const Vec2> targets, const ObstacleSchedule& obstacles, const PlannerConfig& cfg) {
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t H = cfg.horizon;
    if (!graph.has_trim(start_trim)) throw ConfigError("start " + trim_label(start_trim) + " is not in the automaton");
    if (targets.size() < H) throw ConfigError("planner needs one reference target per horizon step");
    if (!obstacles.empty() && obstacles.size() != 2 * H) {
        throw ConfigError("obstacle schedule must hold 2 * horizon samples");
    }
    const double radius = graph.params().footprint_radius;
    const double reach = graph.max_step_distance();
    const bool use_h = cfg.heuristic_weight > 0;

    std::vector<Node> nodes;
    std::unordered_map<Key, int, KeyHash> seen;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
    std::size_t seq = 0;

    auto push = [&](Node n) {
        const Key key = make_key(n.step, n.trim, n.pose);
        auto [it, fresh] = seen.try_emplace(key, static_cast<int>(nodes.size()));
        if (!fresh) {
            Node& old = nodes[it->second];
            if (old.closed || old.g <= n.g) return;
            it->second = static_cast<int>(nodes.size());
            old.closed = true;  // superseded
        }
        const double h = use_h ? cfg.heuristic_weight * heuristic(n.pose, n.step, targets.first(H), reach) : 0.0;
        nodes.push_back(n);
        open.push({n.g + h, seq++, static_cast<int>(nodes.size()) - 1});
    };

    PlanResult result;
    push({start_pose, start_trim, 0, 0.0, -1, nullptr, false});
    int goal = -1;
    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        if (nodes[top.node].closed) continue;
        nodes[top.node].closed = true;
        const Node cur = nodes[top.node];
        if (cur.step == static_cast<int>(H)) {
            goal = top.node;
            break;
        }
        if (++result.stats.expanded > cfg.expansion_cap) {
            result.status = PlanStatus::CapExceeded;
            result.stats.expanded = cfg.expansion_cap;
            result.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            return result;
        }
        const int k = cur.step;
        for (const Primitive& prim : graph.outgoing(cur.trim)) {
            if (k + 1 == static_cast<int>(H) && !graph.reaches_standstill(prim.to)) continue;
            const PlanStep st = apply_primitive(prim, cur.pose);
            if (!obstacles.empty()) {
                if (!collision_free({st.midpoint, radius}, obstacles[2 * k], cfg.safety_margin)) continue;
                if (!collision_free({{st.pose.dx, st.pose.dy}, radius}, obstacles[2 * k + 1], cfg.safety_margin)) {
                    continue;
                }
            }
            ++result.stats.generated;
            push({st.pose, prim.to, k + 1, cur.g + stage_cost(st.pose, targets[k]), top.node, &prim, false});
        }
    }
    result.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (goal < 0) {
        result.status = PlanStatus::Infeasible;
        return result;
    }

    Plan plan;
    plan.start_pose = start_pose;
    plan.start_trim = start_trim;
    plan.cost = nodes[goal].g;
    plan.steps.resize(H);
    for (int n = goal; nodes[n].parent >= 0; n = nodes[n].parent) {
        plan.steps[nodes[n].step - 1] = apply_primitive(*nodes[n].via, nodes[nodes[n].parent].pose);
    }
    result.status = PlanStatus::Ok;
    result.plan = std::move(plan);
    return result;
}

Plan shift_fallback(const Plan& previous, const PrimitiveGraph& graph) {
    if (previous.steps.empty()) throw InvariantError("shift_fallback: empty plan");
    if (!graph.reaches_standstill(previous.final_trim())) {
        throw InvariantError("shift_fallback: final " + trim_label(previous.final_trim()) +
                             " cannot reach standstill");
    }
    Plan out;
    out.start_pose = previous.steps.front().pose;
    out.start_trim = previous.steps.front().to;
    out.steps.assign(previous.steps.begin() + 1, previous.steps.end());
    const GroupElement last = out.steps.empty() ? out.start_pose : out.steps.back().pose;
    out.steps.push_back(apply_primitive(graph.route_to_standstill(previous.final_trim()), last));
    out.cost = 0.0;  // not a search result
    return out;
}

Plan standstill_plan(const PrimitiveGraph& graph, const GroupElement& start_pose, int start_trim, int horizon) {
    if (horizon < 1) throw ConfigError("standstill_plan: horizon must be at least 1");
    Plan out;
    out.start_pose = start_pose;
    out.start_trim = start_trim;
    GroupElement pose = start_pose;
    int trim = start_trim;
    for (int k = 0; k < horizon; ++k) {
        const PlanStep st = apply_primitive(graph.route_to_standstill(trim), pose);
        out.steps.push_back(st);
        pose = st.pose;
        trim = st.to;
    }
    out.cost = 0.0;
    return out;
}

std::vector<GroupElement> replay_plan(const Plan& plan, const PrimitiveGraph& graph) {
    const MotionPrimitiveAutomaton& a = graph.automaton();
    std::vector<GroupElement> poses;
    GroupElement pose = plan.start_pose;
    for (const PlanStep& st : plan.steps) {
        const Trim& from = graph.trim(st.from);
        State x{pose.dx, pose.dy, pose.dpsi, from.v, from.delta};
        if (st.from == st.to) {
            x = integrate(x, Input{}, from.step_duration, kSubsteps, a.params);
        } else {
            const Maneuver* m = a.find_maneuver(st.from, st.to, st.objective);
            if (!m) throw InvariantError("replay_plan: plan uses a primitive outside the automaton");
            const double h = m->duration / static_cast<double>(m->controls.size());
            for (const Input& u : m->controls) x = integrate_step(x, u, h, a.params);
        }
        pose = pose_of(x);
        poses.push_back(pose);
    }
    return poses;
}

}  // namespace mpa
