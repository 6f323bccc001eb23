#include "doctest.h"

#include <cmath>

#include "mpa/errors.hpp"
#include "mpa/running_cost.hpp"
#include "mpa/trims.hpp"

using namespace mpa;

namespace {

double max_abs_diff(const State& a, const State& b) {
    const auto x = to_vector(a);
    const auto y = to_vector(b);
    double m = 0.0;
    for (std::size_t i = 0; i < 5; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

}  // namespace

TEST_CASE("standard trim table") {
    const auto t = standard_trim_table();
    REQUIRE(t.size() == 12);
    CHECK(t[0] == Trim{1, 0.0, 0.0, 0.2});
    CHECK(t[6] == Trim{7, 0.8, 0.0, 0.2});
    CHECK(t[11] == Trim{12, 0.4, 0.60, 0.2});
    const double v[] = {0, 0.4, 0.5, 0.6, 0.7, 0.8, 0.8, 0.8, 0.7, 0.6, 0.5, 0.4};
    const double d[] = {0, -0.60, -0.48, -0.36, -0.24, -0.12, 0, 0.12, 0.24, 0.36, 0.48, 0.60};
    const VehicleParams p;
    for (int i = 0; i < 12; ++i) {
        CHECK(t[i].id == i + 1);
        CHECK(t[i].v == v[i]);
        CHECK(t[i].delta == d[i]);
        CHECK_NOTHROW(validate(t[i], p));
    }
    CHECK(trim_label(12) == "pi12");
}

TEST_CASE("trim_flow") {
    const VehicleParams p;
    const auto t = standard_trim_table();
    SUBCASE("standstill stays at the origin") {
        for (double time : {0.0, 0.2, 3.0}) CHECK(trim_flow(t[0], time, p) == State{});
    }
    SUBCASE("straight trim") { CHECK(max_abs_diff(trim_flow(t[6], 0.2, p), {0.16, 0, 0, 0.8, 0}) < 1e-15); }
    SUBCASE("sharpest left arc") {
        CHECK(trim_yaw_rate(t[11], p) == doctest::Approx(1.7259).epsilon(1e-4));
        CHECK(trim_flow(t[11], 0.2, p).psi == doctest::Approx(0.3452).epsilon(1e-4));
    }
    SUBCASE("closed form matches the RK4 chain for every trim") {
        for (const Trim& tr : t) {
            const State rk = integrate({0, 0, 0, tr.v, tr.delta}, {}, 0.2, 10, p);
            CHECK(max_abs_diff(trim_flow(tr, 0.2, p), rk) < 1e-6);
        }
    }
    SUBCASE("negative time is rejected") { CHECK_THROWS_AS(trim_flow(t[3], -0.1, p), DomainError); }
}

TEST_CASE("trim_displacement") {
    const VehicleParams p;
    const auto t = standard_trim_table();
    CHECK(trim_displacement(t[0], p) == GroupElement{});
    const GroupElement straight = trim_displacement(t[6], p);
    CHECK(straight.dx == doctest::Approx(0.16));
    CHECK(straight.dy == 0.0);
    CHECK(straight.dpsi == 0.0);

    SUBCASE("mirrored steering mirrors the displacement") {
        // pairs (pi2, pi12), (pi3, pi11), ... share v and have opposite delta
        for (int i = 1; i <= 5; ++i) {
            const GroupElement a = trim_displacement(t[i], p);
            const GroupElement b = trim_displacement(t[12 - i], p);
            CHECK(std::abs(a.dx - b.dx) < 1e-9);
            CHECK(std::abs(a.dy + b.dy) < 1e-9);
            CHECK(std::abs(a.dpsi + b.dpsi) < 1e-9);
        }
    }
    SUBCASE("self-loop maps the frame-origin start to the flow end") {
        for (const Trim& tr : t) {
            const State start{0, 0, 0, tr.v, tr.delta};
            CHECK(max_abs_diff(apply_group(trim_displacement(tr, p), start), trim_flow(tr, 0.2, p)) < 1e-15);
        }
    }
}

TEST_CASE("unit_cost") {
    const VehicleParams p;
    const auto t = standard_trim_table();
    for (const Trim& tr : t) {
        CHECK(unit_cost(tr, RunningCost(Objective::J2), 0.2, p) == 0.0);
        CHECK(unit_cost(tr, RunningCost(Objective::J1), 0.2, p) == 0.0);
    }
    auto speed_squared = [](const State& x, const Input&) { return x.v * x.v; };
    CHECK(unit_cost(t[6], speed_squared, 0.2, p) == doctest::Approx(0.128));
    // linear in T
    for (double T : {0.1, 0.4, 1.7}) {
        CHECK(unit_cost(t[4], speed_squared, T, p) == doctest::Approx(T / 0.2 * unit_cost(t[4], speed_squared, 0.2, p)));
    }
}

TEST_CASE("objective labels") {
    CHECK(parse_objective("J3") == Objective::J3);
    CHECK(to_string(Objective::J1) == "J1");
    CHECK_THROWS_AS(parse_objective("J1,J2,J3"), ConfigError);
    CHECK_THROWS_AS(parse_objective("J4"), ConfigError);
}

TEST_CASE("J3 running cost is the equal blend of J1 and J2") {
    const State x{0.3, -0.7, 1.0, 0.5, 0.2};
    const Input u{2.0, -1.5};
    const double l1 = RunningCost(Objective::J1)(x, u);
    const double l2 = RunningCost(Objective::J2)(x, u);
    CHECK(RunningCost(Objective::J3)(x, u) == doctest::Approx(0.5 * l1 + 0.5 * l2));
}
