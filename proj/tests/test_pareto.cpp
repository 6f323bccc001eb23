#include "doctest.h"

#include <random>

#include "mpa/errors.hpp"
#include "mpa/pareto.hpp"

using namespace mpa;

namespace {

const Trim& pi(int id) {
    static const std::vector<Trim> t = standard_trim_table();
    return t.at(id - 1);
}

// brute-force dominance oracle
bool dominated_by_any(const ObjectivePair& q, std::span<const ObjectivePair> pts) {
    for (const auto& o : pts) {
        if (o.j1 <= q.j1 && o.j2 <= q.j2 && (o.j1 < q.j1 || o.j2 < q.j2)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("nondominated_filter") {
    SUBCASE("mutually nondominated points are kept") {
        const std::vector<ObjectivePair> pts{{1, 3}, {2, 2}, {3, 1}};
        CHECK(nondominated_filter(pts) == pts);
    }
    SUBCASE("dominated point is removed") {
        const std::vector<ObjectivePair> pts{{1, 3}, {2, 2}, {3, 1}, {2.5, 2.5}};
        CHECK(nondominated_filter(pts) == std::vector<ObjectivePair>{{1, 3}, {2, 2}, {3, 1}});
    }
    SUBCASE("single point") {
        const std::vector<ObjectivePair> pts{{4, 4}};
        CHECK(nondominated_filter(pts) == pts);
    }
    SUBCASE("duplicates collapse to the first occurrence") {
        const std::vector<ObjectivePair> pts{{2, 2}, {1, 3}, {2, 2}};
        CHECK(nondominated_indices(pts) == std::vector<std::size_t>{1, 0});
    }
    SUBCASE("random sets: exact front, sorted, idempotent") {
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> coord(0, 12);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<ObjectivePair> pts(1 + trial % 25);
            for (auto& q : pts) q = {double(coord(rng)), double(coord(rng))};
            const auto front = nondominated_filter(pts);
            for (const auto& q : front) CHECK_FALSE(dominated_by_any(q, pts));
            for (const auto& q : pts) {
                bool in_front = false;
                for (const auto& f : front) in_front |= (f == q);
                CHECK(in_front != dominated_by_any(q, pts));
            }
            for (std::size_t i = 1; i < front.size(); ++i) {
                CHECK(front[i - 1].j1 < front[i].j1);
                CHECK(front[i - 1].j2 > front[i].j2);
            }
            CHECK(nondominated_filter(front) == front);
        }
    }
}

TEST_CASE("sweep_pareto") {
    const VehicleParams p;
    SUBCASE("identical trims give a single point") {
        const auto front = sweep_pareto({pi(7), pi(7), 0.2, 20, p}, uniform_weights(5));
        REQUIRE(front.size() == 1);
        CHECK(front[0].objectives.j2 <= 1e-9);
        CHECK(front[0].weight == 0.0);
    }
    SUBCASE("standstill to full speed trades distance against effort") {
        const auto front = sweep_pareto({pi(1), pi(7), 0.2, 20, p}, uniform_weights(11));
        CHECK(front.size() >= 2);
        for (std::size_t i = 1; i < front.size(); ++i) {
            CHECK(front[i - 1].objectives.j1 <= front[i].objectives.j1);
            CHECK(front[i - 1].objectives.j2 >= front[i].objectives.j2);
        }
        std::vector<ObjectivePair> objs;
        for (const auto& f : front) objs.push_back(f.objectives);
        CHECK(nondominated_filter(objs) == objs);
    }
    SUBCASE("duplicate weights collapse") {
        const std::vector<double> w{0.5, 0.5, 0.5};
        CHECK(sweep_pareto({pi(1), pi(7), 0.2, 20, p}, w).size() == 1);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(sweep_pareto({pi(1), pi(7), 0.2, 20, p}, std::vector<double>{}), DomainError);
        CHECK_THROWS_AS(sweep_pareto({pi(1), pi(7), 0.2, 20, p}, std::vector<double>{1.2}), DomainError);
        const Trim fast{20, 2.3, 0.0, 0.2};
        CHECK_THROWS_AS(sweep_pareto({pi(1), fast, 0.2, 20, p}, uniform_weights(3)), InfeasibleError);
    }
}
