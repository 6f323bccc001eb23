#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mpa/errors.hpp"
#include "mpa/metrics.hpp"
#include "mpa/report.hpp"
#include "mpa/simulation.hpp"

using namespace mpa;

namespace {

const std::filesystem::path kData = MPA_DATA_DIR;

const MotionPrimitiveAutomaton& universal() {
    static const MotionPrimitiveAutomaton ua =
        build_universal_automaton(standard_trim_table(), std::vector{Objective::J1, Objective::J2, Objective::J3},
                                  default_connectivity(), VehicleParams{});
    return ua;
}

const Scenario& crossing() {
    static const Scenario s = load_scenario(kData / "three_vehicle_crossing.json");
    return s;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("mpa_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

const char* kOneVehicle = R"({
 "map": {"width": 4, "height": 4},
 "steps": 10,
 "vehicles": [{"id": "solo", "reference": {"type": "circle", "center": [2, 2], "radius": 1}}]
})";

}  // namespace

TEST_CASE("default scenario") {
    const Scenario& s = crossing();
    REQUIRE(s.vehicles.size() == 3);
    CHECK(s.vehicles[0].id == "red");
    CHECK(s.vehicles[1].id == "blue");
    CHECK(s.vehicles[2].id == "green");
    CHECK(s.map_width == 4.5);
    CHECK(s.map_height == 4.0);
    CHECK(s.steps == 150);
    CHECK(s.planner.horizon == 8);
    for (const auto& v : s.vehicles) {
        const Vec2 p{v.start_pose.dx, v.start_pose.dy};
        CHECK(v.reference.nearest(p).distance < 1e-9);
        CHECK(p.x > 0);
        CHECK(p.x < s.map_width);
    }
}

TEST_CASE("scenario validation") {
    CHECK_NOTHROW(scenario_from_json(kOneVehicle));
    auto doc = nlohmann::json::parse(kOneVehicle);
    SUBCASE("open polyline") {
        doc["vehicles"][0]["reference"] = {{"type", "polyline"}, {"points", {{0, 0}, {1, 0}, {1, 1}}}};
        CHECK_THROWS_WITH_AS(scenario_from_json(doc.dump()), doctest::Contains("closed"), ConfigError);
    }
    SUBCASE("closed polyline") {
        doc["vehicles"][0]["reference"] = {{"type", "polyline"}, {"points", {{0, 0}, {1, 0}, {1, 1}, {0, 0}}}};
        CHECK(scenario_from_json(doc.dump()).vehicles[0].reference.points().size() == 3);
    }
    SUBCASE("zero vehicles") {
        doc["vehicles"] = nlohmann::json::array();
        CHECK_THROWS_AS(scenario_from_json(doc.dump()), ConfigError);
    }
    SUBCASE("missing field") {
        doc["vehicles"][0].erase("id");
        CHECK_THROWS_WITH_AS(scenario_from_json(doc.dump()), doctest::Contains("scenario.vehicles[0].id"), ParseError);
    }
    SUBCASE("wrong type") {
        doc["steps"] = "many";
        CHECK_THROWS_WITH_AS(scenario_from_json(doc.dump()), doctest::Contains("scenario.steps"), ParseError);
    }
    SUBCASE("unknown reference type") {
        doc["vehicles"][0]["reference"]["type"] = "spiral";
        CHECK_THROWS_AS(scenario_from_json(doc.dump()), ParseError);
    }
    SUBCASE("bad preset") {
        doc["vehicles"][0]["preset"] = "Q";
        CHECK_THROWS_AS(scenario_from_json(doc.dump()), ConfigError);
    }
    SUBCASE("duplicate ids") {
        doc["vehicles"].push_back(doc["vehicles"][0]);
        CHECK_THROWS_AS(scenario_from_json(doc.dump()), ConfigError);
    }
    SUBCASE("syntax error") {
        CHECK_THROWS_AS(scenario_from_json("{\"map\": "), ParseError);
    }
    CHECK_THROWS_AS(load_scenario(kData / "no_such_file.json"), ParseError);
}

TEST_CASE("preset map") {
    const PresetMap m = parse_preset_map("red=A,blue=C,green=D");
    CHECK(m.size() == 3);
    CHECK(m.at("red") == "A");
    CHECK_THROWS_AS(parse_preset_map("red"), ConfigError);
    CHECK_THROWS_AS(parse_preset_map("red=Z"), ConfigError);
    CHECK_THROWS_AS(run_scenario(crossing(), universal(), {{"purple", "A"}}), ConfigError);
}

TEST_CASE("zero steps give an empty log") {
    Scenario s = crossing();
    s.steps = 0;
    const RunLog log = run_scenario(s, universal());
    REQUIRE(log.vehicles.size() == 3);
    for (const auto& v : log.vehicles) CHECK(v.steps.empty());
    const auto m = compute_metrics(log);
    CHECK_FALSE(m.vehicles[0].lap_time_s.has_value());
}

TEST_CASE("circle matching a trim radius is tracked closely") {
    // pi8 (0.8 m/s, 0.12 rad) turns on a 1.246 m radius
    const double R = 1.0 / (std::tan(0.12) * std::cos(std::atan(0.5 * std::tan(0.12))) / 0.15);
    auto doc = nlohmann::json::parse(kOneVehicle);
    doc["steps"] = 150;
    doc["map"] = {{"width", 4.0}, {"height", 4.0}};
    doc["vehicles"][0]["reference"]["radius"] = R;
    doc["vehicles"][0]["nominal_speed"] = 0.8;
    const Scenario s = scenario_from_json(doc.dump());
    const RunLog log = run_scenario(s, universal(), {{"solo", "C"}});
    const auto m = compute_metrics(log);
    CHECK(m.vehicles[0].reference_error_mm.mean < 40.0);
    CHECK(m.vehicles[0].lap_time_s.has_value());
}

TEST_CASE("metrics") {
    RunLog log;
    log.vehicles.push_back({"a", "#000", "C", 1.0, {}, {}});
    for (int i = 1; i <= 3; ++i) {
        StepRecord r;
        r.step = i;
        r.deviation = i * 1e-3;
        r.progress = 0.3 * i;
        r.wall_ms = i;
        r.expanded = 10 * i;
        log.vehicles[0].steps.push_back(r);
    }
    auto m = compute_metrics(log).vehicles[0];
    CHECK(m.reference_error_mm.mean == doctest::Approx(2.0));
    CHECK(m.reference_error_mm.std == doctest::Approx(0.8165).epsilon(1e-4));
    CHECK_FALSE(m.lap_time_s.has_value());  // progress 0.9 < 1.0
    CHECK(m.max_expanded == 30);
    CHECK(m.max_computation_ms == 3.0);

    log.vehicles[0].steps[2].progress = 1.05;
    m = compute_metrics(log).vehicles[0];
    REQUIRE(m.lap_time_s.has_value());
    CHECK(*m.lap_time_s == doctest::Approx(0.6));

    log.vehicles[0].steps.resize(1);
    m = compute_metrics(log).vehicles[0];
    CHECK(m.reference_error_mm.std == 0.0);
    CHECK(mean_std(std::vector<double>{}).mean == 0.0);
}

TEST_CASE("default run: safety, replay, determinism, export") {
    const RunLog log = run_scenario(crossing(), universal());
    for (const auto& v : log.vehicles) CHECK(v.steps.size() == 150);

    const SafetyAudit audit = audit_safety(log, universal());
    CHECK(audit.checks == 3 * 150 * 2);
    CHECK(audit.violations == 0);
    CHECK(replay_error(log, universal()) < 1e-6);

    RunLog again = run_scenario(crossing(), universal());
    for (std::size_t i = 0; i < again.vehicles.size(); ++i) {
        for (std::size_t k = 0; k < again.vehicles[i].steps.size(); ++k) {
            again.vehicles[i].steps[k].wall_ms = log.vehicles[i].steps[k].wall_ms;
        }
    }
    for (std::size_t i = 0; i < log.vehicles.size(); ++i) CHECK(again.vehicles[i].steps == log.vehicles[i].steps);

    const auto report = compute_metrics(log);
    const auto dir = scratch_dir("export");
    const auto files = export_report(report, log, crossing(), dir);
    CHECK(files.size() == 7);
    int csv = 0, svg = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        csv += e.path().extension() == ".csv";
        svg += e.path().extension() == ".svg";
    }
    CHECK(csv == 4);
    CHECK(svg == 3);
    const std::string table = slurp(dir / "report.csv");
    CHECK(table.substr(0, table.find('\n')) ==
          "subgraph,reference error,lap time,max expanded vertices,computation time,max computation time");

    std::map<std::string, std::string> first;
    for (const auto& f : files) first[f.filename().string()] = slurp(f);
    export_report(report, log, crossing(), dir);
    for (const auto& f : files) CHECK(slurp(f) == first[f.filename().string()]);

    // metrics recomputed from the exported logs
    const RunLog back = read_run_log(dir);
    REQUIRE(back.vehicles.size() == 3);
    CHECK(back.vehicles[0].id == "red");
    CHECK(back.step_duration == doctest::Approx(0.2));
    const auto re = compute_metrics(back);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(re.vehicles[i].reference_error_mm.mean ==
              doctest::Approx(report.vehicles[i].reference_error_mm.mean).epsilon(1e-6));
        CHECK(re.vehicles[i].lap_time_s == report.vehicles[i].lap_time_s);
        CHECK(re.vehicles[i].max_expanded == report.vehicles[i].max_expanded);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("own path as reference gives near-zero error") {
    const RunLog log = run_scenario(crossing(), universal());
    const VehicleLog& red = log.vehicles[0];
    std::vector<Vec2> pts;
    for (const auto& r : red.steps) {
        const Vec2 p{r.state.sx, r.state.sy};
        if (pts.empty() || distance(pts.back(), p) > 1e-9) pts.push_back(p);
    }
    if (distance(pts.front(), pts.back()) <= 1e-9) pts.pop_back();
    const ReferencePath own(pts);
    double own_sum = 0.0;
    for (const auto& r : red.steps) own_sum += own.nearest({r.state.sx, r.state.sy}).distance;
    const double own_mean = own_sum / red.steps.size();
    CHECK(own_mean < 1e-9);
    CHECK(own_mean < compute_metrics(log).vehicles[0].reference_error_mm.mean / 1000.0);
}

TEST_CASE("read_run_log errors") {
    CHECK_THROWS_AS(read_run_log(kData / "missing_dir"), ParseError);
    const auto dir = scratch_dir("badlog");
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "x.csv") << "not,a,log\n";
    CHECK_THROWS_WITH_AS(read_run_log(dir), doctest::Contains("x.csv"), ParseError);
    std::filesystem::remove_all(dir);
}
