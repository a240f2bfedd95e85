#include <doctest.h>

#include "seqopt/pareto.hpp"
#include "seqopt/rng.hpp"
#include "test_helpers.hpp"

using namespace seqopt;
using test::dv;

namespace {

std::vector<ParetoEntry> random_entries(Rng& rng, std::size_t n, std::size_t m,
                                        int levels = 10) {
    std::vector<ParetoEntry> out;
    for (std::size_t i = 0; i < n; ++i) {
        ParetoEntry e;
        e.vec = dv({static_cast<int>(i)});
        for (std::size_t k = 0; k < m; ++k)
            e.obj.push_back(static_cast<double>(rng.below(levels)));
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace

TEST_CASE("dominates is weak Pareto dominance under minimization") {
    CHECK(dominates({1, 2}, {2, 2}));
    CHECK(!dominates({1, 2}, {2, 1}));
    CHECK(!dominates({1, 1}, {1, 1})); // no strict component
    CHECK(dominates({1, 1}, {2, 2}));
    CHECK(!dominates({2, 2}, {1, 2}));
    CHECK_THROWS_AS(dominates({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("extract_nondominated basic contracts") {
    SUBCASE("documented example") {
        std::vector<ParetoEntry> c = {{dv({0}), {1, 3}}, {dv({1}), {2, 2}},
                                      {dv({2}), {3, 1}}, {dv({3}), {2, 3}}};
        ParetoSet p = extract_nondominated(c);
        REQUIRE(p.size() == 3);
        CHECK(p.contains(dv({0})));
        CHECK(p.contains(dv({1})));
        CHECK(p.contains(dv({2})));
        CHECK(!p.contains(dv({3})));
    }
    SUBCASE("singleton input is returned") {
        ParetoSet p = extract_nondominated({{dv({7}), {5, 5}}});
        CHECK(p.size() == 1);
    }
    SUBCASE("equal objectives with distinct vectors are all retained") {
        ParetoSet p = extract_nondominated(
            {{dv({0}), {1, 1}}, {dv({1}), {1, 1}}, {dv({2}), {1, 1}}});
        CHECK(p.size() == 3);
    }
    SUBCASE("duplicate vectors collapse") {
        ParetoSet p = extract_nondominated({{dv({0}), {1, 1}}, {dv({0}), {1, 1}}});
        CHECK(p.size() == 1);
    }
}

TEST_CASE("extract_nondominated matches the pairwise brute-force oracle") {
    Rng rng(20240811);
    for (int rep = 0; rep < 300; ++rep) {
        std::size_t n = 1 + rng.below(120);
        std::size_t m = 2 + rng.below(2); // 2 or 3 objectives
        auto entries = random_entries(rng, n, m, 8);
        ParetoSet got = extract_nondominated(entries);
        std::vector<ParetoEntry> expect = test::pareto_oracle(entries);
        REQUIRE(got.size() == expect.size());
        for (const ParetoEntry& e : expect) CHECK(got.contains(e.vec));
    }
}

TEST_CASE("extract_nondominated properties") {
    Rng rng(7);
    for (int rep = 0; rep < 100; ++rep) {
        auto entries = random_entries(rng, 1 + rng.below(80), 2, 6);
        ParetoSet once = extract_nondominated(entries);

        // idempotence
        std::vector<ParetoEntry> again(once.begin(), once.end());
        CHECK(extract_nondominated(again) == once);

        // completeness: every candidate is in the set or dominated by a member
        for (const ParetoEntry& e : entries) {
            if (once.contains(e.vec)) continue;
            bool covered = false;
            for (const ParetoEntry& p : once)
                if (p.obj == e.obj || dominates(p.obj, e.obj)) covered = true;
            CHECK(covered);
        }

        // union monotonicity: members of extract(S u T) that lie in S are
        // non-dominated within S
        auto more = random_entries(rng, 1 + rng.below(80), 2, 6);
        for (ParetoEntry& e : more) e.vec = dv({1000 + e.vec[0]});
        std::vector<ParetoEntry> both = entries;
        both.insert(both.end(), more.begin(), more.end());
        ParetoSet unioned = extract_nondominated(both);
        ParetoSet s_only = extract_nondominated(entries);
        for (const ParetoEntry& e : unioned)
            if (e.vec[0] < 1000) CHECK(s_only.contains(e.vec));
    }
}

TEST_CASE("nondominated_sort peels fronts like repeated extraction") {
    SUBCASE("a Pareto set is a single front") {
        std::vector<ObjectiveVector> objs = {{1, 3}, {2, 2}, {3, 1}};
        auto fronts = nondominated_sort(objs);
        REQUIRE(fronts.size() == 1);
        CHECK(fronts[0].size() == 3);
    }
    SUBCASE("a dominance chain gives one front per point") {
        std::vector<ObjectiveVector> objs = {{3, 3}, {2, 2}, {1, 1}};
        auto fronts = nondominated_sort(objs);
        REQUIRE(fronts.size() == 3);
        CHECK(fronts[0] == std::vector<std::size_t>{2});
        CHECK(fronts[2] == std::vector<std::size_t>{0});
    }
    SUBCASE("random populations match the peeling oracle") {
        Rng rng(99);
        for (int rep = 0; rep < 50; ++rep) {
            std::size_t n = 50;
            std::vector<ObjectiveVector> objs;
            for (std::size_t i = 0; i < n; ++i)
                objs.push_back({rng.real(), rng.real()});
            auto fronts = nondominated_sort(objs);

            // peeling oracle: repeatedly remove the non-dominated subset
            std::vector<std::size_t> remaining(n);
            for (std::size_t i = 0; i < n; ++i) remaining[i] = i;
            std::size_t level = 0;
            while (!remaining.empty()) {
                std::vector<std::size_t> front, rest;
                for (std::size_t i : remaining) {
                    bool dom = false;
                    for (std::size_t j : remaining)
                        if (j != i && dominates(objs[j], objs[i])) dom = true;
                    (dom ? rest : front).push_back(i);
                }
                REQUIRE(level < fronts.size());
                CHECK(fronts[level] == front);
                remaining = rest;
                ++level;
            }
            CHECK(level == fronts.size());
        }
    }
}

TEST_CASE("crowding distance marks boundaries infinite") {
    std::vector<ObjectiveVector> objs = {{0, 4}, {1, 2}, {2, 1}, {4, 0}};
    std::vector<std::size_t> front = {0, 1, 2, 3};
    auto crowd = crowding_distances(objs, front);
    CHECK(crowd[0] == std::numeric_limits<double>::infinity());
    CHECK(crowd[3] == std::numeric_limits<double>::infinity());
    CHECK(crowd[1] > 0);
    CHECK(crowd[1] < std::numeric_limits<double>::infinity());
    // interior: (2-0)/4 + (4-1)/4 vs (4-1)/4 + (2-0)/4
    CHECK(crowd[1] == doctest::Approx(0.5 + 0.75));
    CHECK(crowd[2] == doctest::Approx(0.75 + 0.5));

    auto pair = crowding_distances(objs, {1, 2});
    CHECK(pair[0] == std::numeric_limits<double>::infinity());
    CHECK(pair[1] == std::numeric_limits<double>::infinity());

    // zero-range objective contributes nothing
    std::vector<ObjectiveVector> flat = {{0, 1}, {1, 1}, {2, 1}};
    auto c = crowding_distances(flat, {0, 1, 2});
    CHECK(c[1] == doctest::Approx(1.0));
}
