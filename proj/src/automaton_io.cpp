#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mpa/automaton.hpp"
#include "mpa/errors.hpp"

namespace mpa {

using nlohmann::json;

namespace {

constexpr const char* kFormatName = "motion-primitive-automaton";

json pose_json(const GroupElement& g) { return json::array({g.dx, g.dy, g.dpsi}); }

json state_json(const State& s) { return json::array({s.sx, s.sy, s.psi, s.v, s.delta}); }

// Field access with the JSON path in every error message.
const json& field(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.is_object()) throw ParseError(ctx + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(ctx + "." + key + ": missing field");
    return *it;
}

double number(const json& j, const std::string& ctx) {
    if (!j.is_number()) throw ParseError(ctx + ": expected a number, got " + std::string(j.type_name()));
    return j.get<double>();
}

int integer(const json& j, const std::string& ctx) {
    if (!j.is_number_integer()) throw ParseError(ctx + ": expected an integer, got " + std::string(j.type_name()));
    return j.get<int>();
}

const json& array(const json& j, const std::string& ctx, std::size_t size = 0) {
    if (!j.is_array()) throw ParseError(ctx + ": expected an array, got " + std::string(j.type_name()));
    if (size != 0 && j.size() != size) {
        throw ParseError(ctx + ": expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
    }
    return j;
}

double number_field(const json& obj, const char* key, const std::string& ctx) {
    return number(field(obj, key, ctx), ctx + "." + key);
}

GroupElement parse_pose(const json& j, const std::string& ctx) {
    array(j, ctx, 3);
    return {number(j[0], ctx + "[0]"), number(j[1], ctx + "[1]"), number(j[2], ctx + "[2]")};
}

State parse_state(const json& j, const std::string& ctx) {
    array(j, ctx, 5);
    StateVector v{};
    for (std::size_t i = 0; i < 5; ++i) v[i] = number(j[i], ctx + "[" + std::to_string(i) + "]");
    return from_vector(v);
}

json parse_document(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset -> line/column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(what + ": syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": " + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

VehicleParams parse_params(const json& j, const std::string& ctx) {
    VehicleParams p;
    p.wheelbase = number_field(j, "wheelbase", ctx);
    p.rear_to_cg = number_field(j, "rear_to_cg", ctx);
    p.v_min = number_field(j, "v_min", ctx);
    p.v_max = number_field(j, "v_max", ctx);
    p.delta_max = number_field(j, "delta_max", ctx);
    p.accel_max = number_field(j, "accel_max", ctx);
    p.steer_rate_max = number_field(j, "steer_rate_max", ctx);
    p.footprint_radius = number_field(j, "footprint_radius", ctx);
    return p;
}

}  // namespace

std::string automaton_to_json(const MotionPrimitiveAutomaton& a) {
    json doc;
    doc["format"] = kFormatName;
    doc["version"] = kAutomatonFormatVersion;
    doc["step_duration"] = a.step_duration;
    const VehicleParams& p = a.params;
    doc["params"] = {{"wheelbase", p.wheelbase},
                     {"rear_to_cg", p.rear_to_cg},
                     {"v_min", p.v_min},
                     {"v_max", p.v_max},
                     {"delta_max", p.delta_max},
                     {"accel_max", p.accel_max},
                     {"steer_rate_max", p.steer_rate_max},
                     {"footprint_radius", p.footprint_radius}};
    json trims = json::array();
    for (const auto& t : a.trims) {
        trims.push_back({{"id", t.trim.id},
                         {"v", t.trim.v},
                         {"delta", t.trim.delta},
                         {"step_duration", t.trim.step_duration},
                         {"self_loop", pose_json(t.self_loop)}});
    }
    doc["trims"] = std::move(trims);
    json edges = json::array();
    for (const auto& m : a.maneuvers) {
        json controls = json::array();
        for (const auto& u : m.controls) controls.push_back(json::array({u.accel, u.steer_rate}));
        json states = json::array();
        for (const auto& s : m.states) states.push_back(state_json(s));
        edges.push_back({{"from", m.from},
                         {"to", m.to},
                         {"objective", to_string(m.objective)},
                         {"duration", m.duration},
                         {"displacement", pose_json(m.displacement)},
                         {"costs", json::array({m.costs.j1, m.costs.j2, m.costs.j3})},
                         {"controls", std::move(controls)},
                         {"states", std::move(states)}});
    }
    doc["maneuvers"] = std::move(edges);
    return doc.dump(1) + "\n";
}

MotionPrimitiveAutomaton automaton_from_json(const std::string& text) {
    const json doc = parse_document(text, "automaton");
    const std::string root = "automaton";
    const json& fmt = field(doc, "format", root);
    if (!fmt.is_string() || fmt.get<std::string>() != kFormatName) {
        throw ParseError(root + ".format: expected \"" + std::string(kFormatName) + "\"");
    }
    const int version = integer(field(doc, "version", root), root + ".version");
    if (version != kAutomatonFormatVersion) {
        throw ParseError(root + ".version: unsupported version " + std::to_string(version) + " (expected " +
                         std::to_string(kAutomatonFormatVersion) + ")");
    }

    MotionPrimitiveAutomaton a;
    a.step_duration = number_field(doc, "step_duration", root);
    a.params = parse_params(field(doc, "params", root), root + ".params");

    const json& trims = array(field(doc, "trims", root), root + ".trims");
    for (std::size_t i = 0; i < trims.size(); ++i) {
        const std::string ctx = root + ".trims[" + std::to_string(i) + "]";
        TrimVertex t;
        t.trim.id = integer(field(trims[i], "id", ctx), ctx + ".id");
        t.trim.v = number_field(trims[i], "v", ctx);
        t.trim.delta = number_field(trims[i], "delta", ctx);
        t.trim.step_duration = number_field(trims[i], "step_duration", ctx);
        t.self_loop = parse_pose(field(trims[i], "self_loop", ctx), ctx + ".self_loop");
        a.trims.push_back(t);
    }

    const json& edges = array(field(doc, "maneuvers", root), root + ".maneuvers");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string ctx = root + ".maneuvers[" + std::to_string(i) + "]";
        const json& e = edges[i];
        Maneuver m;
        m.from = integer(field(e, "from", ctx), ctx + ".from");
        m.to = integer(field(e, "to", ctx), ctx + ".to");
        const json& obj = field(e, "objective", ctx);
        if (!obj.is_string()) throw ParseError(ctx + ".objective: expected a string");
        try {
            m.objective = parse_objective(obj.get<std::string>());
        } catch (const ConfigError& err) {
            throw ParseError(ctx + ".objective: " + err.what());
        }
        m.duration = number_field(e, "duration", ctx);
        m.displacement = parse_pose(field(e, "displacement", ctx), ctx + ".displacement");
        const json& costs = array(field(e, "costs", ctx), ctx + ".costs", 3);
        m.costs = {number(costs[0], ctx + ".costs[0]"), number(costs[1], ctx + ".costs[1]"),
                   number(costs[2], ctx + ".costs[2]")};
        const json& controls = array(field(e, "controls", ctx), ctx + ".controls");
        for (std::size_t k = 0; k < controls.size(); ++k) {
            const std::string c = ctx + ".controls[" + std::to_string(k) + "]";
            array(controls[k], c, 2);
            m.controls.push_back({number(controls[k][0], c + "[0]"), number(controls[k][1], c + "[1]")});
        }
        const json& states = array(field(e, "states", ctx), ctx + ".states");
        for (std::size_t k = 0; k < states.size(); ++k) {
            m.states.push_back(parse_state(states[k], ctx + ".states[" + std::to_string(k) + "]"));
        }
        a.maneuvers.push_back(std::move(m));
    }

    const ValidationReport rep = validate_automaton(a);
    if (!rep.ok()) {
        std::ostringstream os;
        os << "automaton failed validation:";
        for (const auto& f : rep.failures) os << "\n  " << f;
        throw IntegrityError(os.str());
    }
    return a;
}

void save_automaton(const MotionPrimitiveAutomaton& a, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << automaton_to_json(a);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

MotionPrimitiveAutomaton load_automaton(const std::filesystem::path& path) {
    return automaton_from_json(read_file(path));
}

std::vector<Trim> load_trims(const std::filesystem::path& path) {
    const std::string ctx = path.filename().string();
    const json doc = parse_document(read_file(path), ctx);
    const json& trims = array(field(doc, "trims", ctx), ctx + ".trims");
    std::vector<Trim> out;
    for (std::size_t i = 0; i < trims.size(); ++i) {
        const std::string c = ctx + ".trims[" + std::to_string(i) + "]";
        Trim t;
        t.id = integer(field(trims[i], "id", c), c + ".id");
        t.v = number_field(trims[i], "v", c);
        t.delta = number_field(trims[i], "delta", c);
        if (trims[i].contains("step_duration")) t.step_duration = number_field(trims[i], "step_duration", c);
        out.push_back(t);
    }
    return out;
}

Connectivity load_connectivity(const std::filesystem::path& path) {
    const std::string ctx = path.filename().string();
    const json doc = parse_document(read_file(path), ctx);
    const json& pairs = array(field(doc, "pairs", ctx), ctx + ".pairs");
    Connectivity out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const std::string c = ctx + ".pairs[" + std::to_string(i) + "]";
        array(pairs[i], c, 2);
        out.emplace_back(integer(pairs[i][0], c + "[0]"), integer(pairs[i][1], c + "[1]"));
    }
    return out;
}

}  // namespace mpa
