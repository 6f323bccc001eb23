#include "mpa/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mpa/errors.hpp"

namespace mpa {

using nlohmann::json;

namespace {

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

double number_field(const json& obj, const char* key, const std::string& ctx) {
    return number(field(obj, key, ctx), ctx + "." + key);
}

double number_or(const json& obj, const char* key, double fallback, const std::string& ctx) {
    return obj.contains(key) ? number_field(obj, key, ctx) : fallback;
}

int integer_field(const json& obj, const char* key, const std::string& ctx) {
    const json& j = field(obj, key, ctx);
    if (!j.is_number_integer()) throw ParseError(ctx + "." + key + ": expected an integer");
    return j.get<int>();
}

std::string string_field(const json& obj, const char* key, const std::string& ctx) {
    const json& j = field(obj, key, ctx);
    if (!j.is_string()) throw ParseError(ctx + "." + key + ": expected a string");
    return j.get<std::string>();
}

Vec2 point(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.size() != 2) throw ParseError(ctx + ": expected [x, y]");
    return {number(j[0], ctx + "[0]"), number(j[1], ctx + "[1]")};
}

ReferencePath parse_reference(const json& j, const std::string& ctx) {
    const std::string type = string_field(j, "type", ctx);
    try {
        if (type == "lemniscate") {
            return lemniscate_path(point(field(j, "center", ctx), ctx + ".center"),
                                   number_field(j, "half_width", ctx),
                                   j.contains("samples") ? integer_field(j, "samples", ctx) : 400);
        }
        if (type == "circle") {
            bool clockwise = false;
            if (j.contains("clockwise")) {
                if (!j["clockwise"].is_boolean()) throw ParseError(ctx + ".clockwise: expected a boolean");
                clockwise = j["clockwise"].get<bool>();
            }
            return circle_path(point(field(j, "center", ctx), ctx + ".center"), number_field(j, "radius", ctx),
                               j.contains("samples") ? integer_field(j, "samples", ctx) : 400,
                               number_or(j, "phase", 0.0, ctx), clockwise);
        }
        if (type == "polyline") {
            const json& pts = field(j, "points", ctx);
            if (!pts.is_array()) throw ParseError(ctx + ".points: expected an array");
            std::vector<Vec2> v;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                v.push_back(point(pts[i], ctx + ".points[" + std::to_string(i) + "]"));
            }
            if (v.size() < 2 || distance(v.front(), v.back()) > 1e-9) {
                throw ConfigError(ctx + ".points: reference polyline must be closed (last point equal to the first)");
            }
            v.pop_back();
            return ReferencePath(std::move(v));
        }
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        throw ConfigError(msg.rfind(ctx, 0) == 0 ? msg : ctx + ": " + msg);
    }
    throw ParseError(ctx + ".type: unknown reference type '" + type + "' (lemniscate, circle, polyline)");
}

}  // namespace

void validate(const Scenario& s) {
    if (s.vehicles.empty()) throw ConfigError("scenario.vehicles: at least one vehicle is required");
    if (!(s.map_width > 0) || !(s.map_height > 0)) throw ConfigError("scenario.map: extent must be positive");
    if (s.steps < 0) throw ConfigError("scenario.steps: must be non-negative");
    if (!(s.step_duration > 0)) throw ConfigError("scenario.step_duration: must be positive");
    validate(s.planner);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < s.vehicles.size(); ++i) {
        const VehicleSpec& v = s.vehicles[i];
        const std::string ctx = "scenario.vehicles[" + std::to_string(i) + "]";
        if (v.id.empty() || !std::all_of(v.id.begin(), v.id.end(), [](unsigned char c) {
                return std::isalnum(c) || c == '_' || c == '-';
            })) {
            throw ConfigError(ctx + ".id: must be non-empty and use only letters, digits, '_' or '-'");
        }
        if (!ids.insert(v.id).second) throw ConfigError(ctx + ".id: duplicate id '" + v.id + "'");
        subgraph_preset(std::string_view(v.preset));
        if (!(v.nominal_speed > 0)) throw ConfigError(ctx + ".nominal_speed: must be positive");
        if (v.start_trim < 1) throw ConfigError(ctx + ".start_trim: must be a trim id");
    }
}

Scenario scenario_from_json(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
    const std::string root = "scenario";
    Scenario s;
    s.name = doc.contains("name") ? string_field(doc, "name", root) : source;
    const json& map = field(doc, "map", root);
    s.map_width = number_field(map, "width", root + ".map");
    s.map_height = number_field(map, "height", root + ".map");
    s.steps = integer_field(doc, "steps", root);
    s.step_duration = number_or(doc, "step_duration", kStepDuration, root);
    if (doc.contains("planner")) {
        const json& p = doc["planner"];
        const std::string ctx = root + ".planner";
        if (p.contains("horizon")) s.planner.horizon = integer_field(p, "horizon", ctx);
        s.planner.heuristic_weight = number_or(p, "heuristic_weight", s.planner.heuristic_weight, ctx);
        s.planner.safety_margin = number_or(p, "safety_margin", s.planner.safety_margin, ctx);
        if (p.contains("expansion_cap")) {
            const int cap = integer_field(p, "expansion_cap", ctx);
            if (cap <= 0) throw ConfigError(ctx + ".expansion_cap: must be positive");
            s.planner.expansion_cap = static_cast<std::size_t>(cap);
        }
    }
    const json& vehicles = field(doc, "vehicles", root);
    if (!vehicles.is_array()) throw ParseError(root + ".vehicles: expected an array");
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        const std::string ctx = root + ".vehicles[" + std::to_string(i) + "]";
        const json& v = vehicles[i];
        ReferencePath ref = parse_reference(field(v, "reference", ctx), ctx + ".reference");
        VehicleSpec spec{string_field(v, "id", ctx),
                         v.contains("color") ? string_field(v, "color", ctx) : "#444444",
                         {},
                         v.contains("start_trim") ? integer_field(v, "start_trim", ctx) : kStandstill,
                         ref,
                         v.contains("preset") ? string_field(v, "preset", ctx) : "C",
                         number_or(v, "nominal_speed", 0.6, ctx)};
        // start pose: explicit, or on the reference at arc length s
        const json start = v.contains("start") ? v["start"] : json{{"s", 0.0}};
        if (start.contains("s")) {
            const double s0 = number_field(start, "s", ctx + ".start");
            const Vec2 p = ref.point_at(s0);
            spec.start_pose = {p.x, p.y, ref.heading_at(s0)};
        } else {
            spec.start_pose = {number_field(start, "x", ctx + ".start"), number_field(start, "y", ctx + ".start"),
                               number_field(start, "psi", ctx + ".start")};
        }
        s.vehicles.push_back(std::move(spec));
    }
    validate(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open scenario " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return scenario_from_json(os.str(), path.filename().string());
}

}  // namespace mpa
