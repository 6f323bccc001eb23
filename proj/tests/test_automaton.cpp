#include "doctest.h"

#include <cstring>
#include <filesystem>

#include "json.hpp"
#include "mpa/automaton.hpp"
#include "mpa/errors.hpp"

using namespace mpa;

namespace {

const std::vector<Objective> kAll{Objective::J1, Objective::J2, Objective::J3};

const MotionPrimitiveAutomaton& universal() {
    static const MotionPrimitiveAutomaton ua =
        build_universal_automaton(standard_trim_table(), kAll, default_connectivity(), VehicleParams{});
    return ua;
}

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool bitwise_equal(const MotionPrimitiveAutomaton& a, const MotionPrimitiveAutomaton& b) {
    if (a.maneuvers.size() != b.maneuvers.size()) return false;
    for (std::size_t i = 0; i < a.maneuvers.size(); ++i) {
        const auto& x = a.maneuvers[i];
        const auto& y = b.maneuvers[i];
        if (x.states.size() != y.states.size()) return false;
        for (std::size_t k = 0; k < x.states.size(); ++k) {
            const auto u = to_vector(x.states[k]);
            const auto w = to_vector(y.states[k]);
            for (int j = 0; j < 5; ++j) {
                if (!bitwise_equal(u[j], w[j])) return false;
            }
        }
        for (std::size_t k = 0; k < x.controls.size(); ++k) {
            if (!bitwise_equal(x.controls[k].accel, y.controls[k].accel)) return false;
            if (!bitwise_equal(x.controls[k].steer_rate, y.controls[k].steer_rate)) return false;
        }
        if (!bitwise_equal(x.costs.j3, y.costs.j3) || !bitwise_equal(x.displacement.dpsi, y.displacement.dpsi)) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("default connectivity links every trim to standstill") {
    const auto c = default_connectivity();
    CHECK(c.size() == 44);
    const auto& ua = universal();
    CHECK(ua.trims.size() == 12);
    CHECK(ua.maneuvers.size() == 132);
    const auto steps = steps_to_standstill(ua);
    CHECK(steps.size() == 12);
    CHECK(steps.at(1) == 0);
    CHECK(steps.at(7) == 1);
    CHECK(steps.at(4) == 2);
}

TEST_CASE("universal automaton validates") {
    const auto rep = validate_automaton(universal());
    for (const auto& f : rep.failures) INFO(f);
    CHECK(rep.ok());
    CHECK(rep.edges.size() == 132);
    for (const auto& e : rep.edges) {
        CHECK(e.dynamics_residual <= 1e-9);
        CHECK(e.boundary_residual <= 1e-6);
        CHECK(e.bound_violation <= 1e-9);
    }
}

TEST_CASE("self loops equal the trim displacement") {
    for (const auto& t : universal().trims) {
        CHECK(t.self_loop == trim_displacement(t.trim, universal().params));
    }
}

TEST_CASE("edges are labelled and keyed by objective") {
    const auto& ua = universal();
    const Maneuver* m1 = ua.find_maneuver(1, 7, Objective::J1);
    const Maneuver* m2 = ua.find_maneuver(1, 7, Objective::J2);
    const Maneuver* m3 = ua.find_maneuver(1, 7, Objective::J3);
    REQUIRE(m1);
    REQUIRE(m2);
    REQUIRE(m3);
    CHECK(m1->costs.j1 <= m3->costs.j1 + 1e-9);
    CHECK(m2->costs.j2 <= m3->costs.j2 + 1e-9);
    CHECK(ua.find_maneuver(1, 4, Objective::J3) == nullptr);
}

TEST_CASE("subgraph presets") {
    const auto& ua = universal();
    for (char p : {'A', 'B', 'C'}) {
        const auto s = configure_subgraph(ua, subgraph_preset(p));
        CHECK(s.trims.size() == 12);
        CHECK(s.maneuvers.size() == 44);
        CHECK(validate_automaton(s).ok());
    }
    const auto a = configure_subgraph(ua, subgraph_preset('A'));
    for (const auto& m : a.maneuvers) CHECK(m.objective == Objective::J1);

    const auto d = configure_subgraph(ua, subgraph_preset('D'));
    CHECK(d.trims.size() == 8);
    CHECK(d.maneuvers.size() == 20);
    for (const auto& m : d.maneuvers) {
        CHECK(m.objective == Objective::J3);
        CHECK(subgraph_preset('D').enabled_trims.contains(m.from));
        CHECK(subgraph_preset('D').enabled_trims.contains(m.to));
    }
    CHECK(steps_to_standstill(d).size() == 8);
    CHECK(validate_automaton(d).ok());
}

TEST_CASE("subgraph configuration errors") {
    const auto& ua = universal();
    SubgraphConfig no_standstill{{2, 3, 4}, Objective::J3};
    CHECK_THROWS_AS(configure_subgraph(ua, no_standstill), ConfigError);
    SubgraphConfig unknown{{1, 13}, Objective::J3};
    CHECK_THROWS_WITH_AS(configure_subgraph(ua, unknown), doctest::Contains("pi13"), ConfigError);
    CHECK_THROWS_AS(configure_subgraph(ua, SubgraphConfig{}), ConfigError);
    CHECK_THROWS_AS(subgraph_preset('E'), ConfigError);
    CHECK_THROWS_AS(subgraph_preset(std::string_view("AB")), ConfigError);
}

TEST_CASE("validation catches injected faults") {
    const auto& ua = universal();
    SUBCASE("perturbed control") {
        auto bad = ua;
        bad.maneuvers[3].controls[5].accel += 0.1;
        const auto rep = validate_automaton(bad);
        CHECK_FALSE(rep.ok());
        CHECK(rep.edges[3].dynamics_residual > 1e-6);
        CHECK_FALSE(rep.edges[3].ok);
    }
    SUBCASE("wrong terminal trim") {
        auto bad = ua;
        bad.maneuvers[0].to = bad.maneuvers[0].to == 12 ? 11 : 12;
        CHECK_FALSE(validate_automaton(bad).ok());
    }
    SUBCASE("standstill unreachable") {
        auto bad = configure_subgraph(ua, subgraph_preset('C'));
        std::erase_if(bad.maneuvers, [](const Maneuver& m) { return m.to == kStandstill; });
        const auto rep = validate_automaton(bad);
        CHECK_FALSE(rep.ok());
        CHECK(rep.steps_to_standstill.size() == 1);
    }
    SUBCASE("bound violation") {
        auto bad = ua;
        for (auto& s : bad.maneuvers[0].states) s.v += 5.0;
        CHECK_FALSE(validate_automaton(bad).ok());
    }
}

TEST_CASE("infeasible pairs are omitted and logged") {
    VehicleParams p;
    p.accel_max = 1.0;  // at most 0.2 m/s change per step
    const std::vector<Trim> trims{{1, 0.0, 0.0}, {2, 0.1, 0.0}, {3, 0.5, 0.0}};
    const Connectivity c{{1, 2}, {2, 1}, {2, 3}, {3, 2}};
    BuildLog log;
    const auto ua = build_universal_automaton(trims, std::vector{Objective::J2}, c, p, &log);
    CHECK(ua.maneuvers.size() == 2);
    REQUIRE(log.omitted.size() == 2);
    CHECK(log.omitted[0].find("pi2->pi3") == 0);
    CHECK(log.omitted[0].find("accel_max") != std::string::npos);
    // pi3 is isolated, so the build is not a valid automaton
    CHECK_FALSE(validate_automaton(ua).ok());
}

TEST_CASE("optimizer failures abort the build") {
    const PairOptimizer failing = [](const Trim& from, const Trim&, std::span<const Objective>) -> std::vector<Maneuver> {
        if (from.id == 2) throw ConvergenceError("iteration cap", {});
        return {};
    };
    const std::vector<Trim> trims{{1, 0.0, 0.0}, {2, 0.4, 0.0}};
    CHECK_THROWS_WITH_AS(build_universal_automaton(trims, kAll, {{1, 2}, {2, 1}}, VehicleParams{}, failing),
                         doctest::Contains("pi2->pi1"), BuildError);
}

TEST_CASE("build rejects malformed inputs") {
    const std::vector<Trim> dup{{1, 0.0, 0.0}, {1, 0.4, 0.0}};
    CHECK_THROWS_AS(build_universal_automaton(dup, kAll, {}, VehicleParams{}), ConfigError);
    const std::vector<Trim> fast{{1, 0.0, 0.0}, {2, 2.0, 0.0}};
    CHECK_THROWS_AS(build_universal_automaton(fast, kAll, {}, VehicleParams{}), ConfigError);
    CHECK_THROWS_AS(build_universal_automaton(std::vector<Trim>{}, kAll, {}, VehicleParams{}), ConfigError);
}

TEST_CASE("json round trip is bitwise exact") {
    const auto& ua = universal();
    const std::string text = automaton_to_json(ua);
    const auto back = automaton_from_json(text);
    CHECK(back == ua);
    CHECK(bitwise_equal(back, ua));
    CHECK(automaton_to_json(back) == text);

    const auto path = std::filesystem::temp_directory_path() / "mpa_test_automaton.json";
    save_automaton(ua, path);
    CHECK(load_automaton(path) == ua);
    std::filesystem::remove(path);
}

TEST_CASE("json errors carry context") {
    const std::string text = automaton_to_json(configure_subgraph(universal(), subgraph_preset('D')));
    CHECK_THROWS_WITH_AS(automaton_from_json(text.substr(0, text.size() / 2)), doctest::Contains("line"), ParseError);

    auto doc = nlohmann::json::parse(text);
    SUBCASE("version") {
        doc["version"] = 99;
        CHECK_THROWS_WITH_AS(automaton_from_json(doc.dump()), doctest::Contains("version"), ParseError);
    }
    SUBCASE("missing field") {
        doc["maneuvers"][2].erase("states");
        CHECK_THROWS_WITH_AS(automaton_from_json(doc.dump()), doctest::Contains("automaton.maneuvers[2].states"),
                             ParseError);
    }
    SUBCASE("wrong type") {
        doc["trims"][0]["v"] = "fast";
        CHECK_THROWS_WITH_AS(automaton_from_json(doc.dump()), doctest::Contains("automaton.trims[0].v"), ParseError);
    }
    SUBCASE("bad objective") {
        doc["maneuvers"][0]["objective"] = "J4";
        CHECK_THROWS_AS(automaton_from_json(doc.dump()), ParseError);
    }
    SUBCASE("tampered trajectory") {
        doc["maneuvers"][0]["states"][10][0] = 0.5;
        CHECK_THROWS_AS(automaton_from_json(doc.dump()), IntegrityError);
    }
}

TEST_CASE("shipped trim and connectivity files") {
    const std::filesystem::path data = MPA_DATA_DIR;
    const auto trims = load_trims(data / "standard_trims.json");
    CHECK(trims == standard_trim_table());
    const auto c = load_connectivity(data / "default_connectivity.json");
    CHECK(c == default_connectivity());
}
