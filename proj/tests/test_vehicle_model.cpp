#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mpa/errors.hpp"
#include "mpa/vehicle_model.hpp"

using namespace mpa;

namespace {

double max_abs_diff(const State& a, const State& b) {
    const auto x = to_vector(a);
    const auto y = to_vector(b);
    double m = 0.0;
    for (std::size_t i = 0; i < 5; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

State random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(-5.0, 5.0), ang(-4.0, 4.0), vel(0.0, 0.8), steer(-0.6, 0.6);
    return {pos(rng), pos(rng), ang(rng), vel(rng), steer(rng)};
}

}  // namespace

TEST_CASE("eval_dynamics") {
    const VehicleParams p;
    SUBCASE("straight driving has no lateral motion") {
        const auto f = eval_dynamics({0, 0, 0, 0.8, 0}, {0, 0}, p);
        CHECK(f == StateVector{0.8, 0, 0, 0, 0});
    }
    SUBCASE("zero velocity annihilates the kinematic rows") {
        const auto f = eval_dynamics({0, 0, 0, 0, 0.6}, {0, 0}, p);
        CHECK(f == StateVector{0, 0, 0, 0, 0});
    }
    SUBCASE("yaw rate under steering") {
        // hand-calculator values: beta = atan(0.5 tan 0.6), psi_dot = (0.4/0.15) tan(0.6) cos(beta)
        const auto f = eval_dynamics({0, 0, 0, 0.4, 0.6}, {0, 0}, p);
        CHECK(f[2] == doctest::Approx(1.7259).epsilon(1e-4));
    }
    SUBCASE("input rows copy the input exactly") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> in(-9.0, 9.0);
        for (int i = 0; i < 100; ++i) {
            const Input u{in(rng), in(rng)};
            const auto f = eval_dynamics(random_state(rng), u, p);
            CHECK(f[3] == u.accel);
            CHECK(f[4] == u.steer_rate);
        }
    }
    SUBCASE("non-finite input is rejected") {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(eval_dynamics({0, 0, 0, nan, 0}, {0, 0}, p), DomainError);
        CHECK_THROWS_AS(eval_dynamics({0, 0, 0, 0, 0}, {std::numeric_limits<double>::infinity(), 0}, p),
                        DomainError);
    }
}

TEST_CASE("sideslip_beta") {
    const VehicleParams p;
    CHECK(sideslip_beta(0.0, p) == 0.0);
    CHECK(sideslip_beta(0.6, p) == doctest::Approx(0.3297).epsilon(1e-4));
    for (double d = -1.5; d <= 1.5; d += 0.05) CHECK(sideslip_beta(-d, p) == -sideslip_beta(d, p));
    CHECK_THROWS_AS(sideslip_beta(std::numbers::pi / 2, p), DomainError);
    CHECK_THROWS_AS(sideslip_beta(-2.0, p), DomainError);
}

TEST_CASE("dynamics_state_jacobian matches central differences") {
    const VehicleParams p;
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const State x = random_state(rng);
        const auto j = dynamics_state_jacobian(x, p);
        for (std::size_t col = 0; col < 5; ++col) {
            auto plus = to_vector(x), minus = to_vector(x);
            constexpr double h = 1e-6;
            plus[col] += h;
            minus[col] -= h;
            const auto fp = eval_dynamics(from_vector(plus), {}, p);
            const auto fm = eval_dynamics(from_vector(minus), {}, p);
            for (std::size_t row = 0; row < 5; ++row) {
                CHECK(j[row * 5 + col] == doctest::Approx((fp[row] - fm[row]) / (2 * h)).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("integrate_step") {
    const VehicleParams p;
    SUBCASE("constant speed straight line") {
        const State x = integrate_step({0, 0, 0, 0.8, 0}, {0, 0}, 0.2, p);
        CHECK(max_abs_diff(x, {0.16, 0, 0, 0.8, 0}) < 1e-15);
    }
    SUBCASE("uniform acceleration is integrated exactly") {
        const State x = integrate_step({0, 0, 0, 0, 0}, {1, 0}, 0.2, p);
        CHECK(max_abs_diff(x, {0.02, 0, 0, 0.2, 0}) < 1e-15);
    }
    SUBCASE("substep refinement on trim states") {
        for (double v : {0.0, 0.4, 0.5, 0.6, 0.7, 0.8}) {
            for (double d : {-0.6, -0.48, -0.36, -0.24, -0.12, 0.0, 0.12, 0.24, 0.36, 0.48, 0.6}) {
                const State x0{0, 0, 0, v, d};
                // a single 0.2 s step is off by up to ~1e-5 at the tightest turn
                CHECK(max_abs_diff(integrate_step(x0, {}, 0.2, p), integrate(x0, {}, 0.2, 10, p)) < 2e-5);
                // the 10-substep primitive step is converged to 1e-6
                CHECK(max_abs_diff(integrate(x0, {}, 0.2, 10, p), integrate(x0, {}, 0.2, 100, p)) < 1e-6);
            }
        }
    }
    SUBCASE("fourth-order convergence") {
        const State x0{0.3, -0.2, 0.4, 0.3, -0.2};
        const Input u{0.4, 0.8};
        const State ref = integrate(x0, u, 1.0, 4096, p);
        const double e1 = max_abs_diff(integrate(x0, u, 1.0, 16, p), ref);
        const double e2 = max_abs_diff(integrate(x0, u, 1.0, 32, p), ref);
        CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));
    }
    SUBCASE("non-positive dt is rejected") {
        CHECK_THROWS_AS(integrate_step({}, {}, 0.0, p), DomainError);
        CHECK_THROWS_AS(integrate_step({}, {}, -0.1, p), DomainError);
    }
}

TEST_CASE("group action") {
    SUBCASE("identity") {
        const State x{1, 2, 3, 0.4, 0.1};
        CHECK(apply_group({}, x) == x);
    }
    SUBCASE("quarter turn with translation") {
        const State y = apply_group({1, 2, std::numbers::pi / 2}, {1, 0, 0, 0.5, 0.1});
        CHECK(max_abs_diff(y, {1, 3, std::numbers::pi / 2, 0.5, 0.1}) < 1e-15);
    }
    SUBCASE("composition") {
        const GroupElement g{1.2, -0.3, 0.7};
        CHECK(compose_group(g, {}) == g);
        const GroupElement c = compose_group({1, 0, std::numbers::pi / 2}, {1, 0, 0});
        CHECK(c.dx == doctest::Approx(1.0));
        CHECK(c.dy == doctest::Approx(1.0));
        CHECK(c.dpsi == doctest::Approx(std::numbers::pi / 2));
    }
    SUBCASE("group axioms on random elements") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> d(-3.0, 3.0);
        for (int i = 0; i < 500; ++i) {
            const GroupElement a{d(rng), d(rng), d(rng)}, b{d(rng), d(rng), d(rng)};
            const State x = random_state(rng);
            CHECK(max_abs_diff(apply_group(invert_group(a), apply_group(a, x)), x) < 1e-12);
            const GroupElement e = compose_group(a, invert_group(a));
            CHECK(std::abs(e.dx) < 1e-12);
            CHECK(std::abs(e.dy) < 1e-12);
            CHECK(std::abs(e.dpsi) < 1e-12);
            CHECK(max_abs_diff(apply_group(compose_group(a, b), x), apply_group(a, apply_group(b, x))) < 1e-12);
        }
    }
}

TEST_CASE("normalize_angle maps into (-pi, pi]") {
    CHECK(normalize_angle(std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(normalize_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(normalize_angle(7.0) == doctest::Approx(7.0 - 2 * std::numbers::pi));
    CHECK(normalize_angle(-0.25) == -0.25);
}

TEST_CASE("flows are equivariant under the group action") {
    const VehicleParams p;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> d(-3.0, 3.0), acc(-8.0, 8.0), rate(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const GroupElement g{d(rng), d(rng), d(rng)};
        State a = random_state(rng);
        State b = apply_group(g, a);
        for (int piece = 0; piece < 5; ++piece) {
            // keep steering inside the model's domain
            const Input u{acc(rng), rate(rng) * (std::abs(a.delta) > 0.8 ? 0.0 : 0.1)};
            a = integrate(a, u, 0.2, 10, p);
            b = integrate(b, u, 0.2, 10, p);
        }
        CHECK(max_abs_diff(apply_group(g, a), b) < 1e-9);
    }
}

TEST_CASE("vehicle params validation") {
    VehicleParams p;
    CHECK_NOTHROW(validate(p));
    p.rear_to_cg = 0.2;
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = {};
    p.wheelbase = 0.0;
    CHECK_THROWS_AS(validate(p), ConfigError);
}
