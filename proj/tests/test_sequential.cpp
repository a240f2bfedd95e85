#include <doctest.h>

#include <set>

#include "seqopt/benchmark.hpp"
#include "seqopt/case_study.hpp"
#include "seqopt/sequential.hpp"
#include "seqopt/surrogate.hpp"
#include "test_helpers.hpp"

using namespace seqopt;
using test::dv;
using test::tiny_space;

namespace {

SequentialConfig config_for(const DesignSpace& space, const GroupingScheme& g,
                            const StartingBound& b, int depth = 1) {
    (void)space;
    SequentialConfig c;
    c.grouping = g;
    c.bound = b;
    c.iterative_depth = depth;
    return c;
}

} // namespace

TEST_CASE("run_stage candidate accounting") {
    DesignSpace large = make_case_study_space(CaseStudyScale::large);
    BenchmarkBackend backend(large, {BenchmarkFamily::random_table, 2, 5, 0.0});
    GroupingScheme fields = field_grouped(large);
    DesignVector baseline = resolve_bound(large, {"low", BoundPolicy::low, 0, {}});

    SUBCASE("stage 1 of the field grouping generates 1440 candidates") {
        EvaluationLedger ledger;
        StageResult s1 = run_stage(large, {baseline}, fields.stages[0], baseline, ledger, backend);
        CHECK(s1.generated_count == 1440);
        CHECK(ledger.raw_requests() == 1440);
        CHECK(ledger.unique_evaluations() == 1440);
        CHECK(s1.pareto.size() >= 1);
    }

    SUBCASE("stage 2 with a carried set of 10 generates 7200 candidates") {
        // ten distinct architecture assignments, hvac/controls at baseline
        std::vector<DesignVector> carried;
        for (int k = 0; k < 10; ++k) {
            DesignVector v = baseline;
            v[0] = static_cast<OptionIndex>(k % 3);
            v[1] = static_cast<OptionIndex>(k % 4);
            v[2] = static_cast<OptionIndex>((k / 4) % 4);
            carried.push_back(v);
        }
        CHECK(std::set<DesignVector>(carried.begin(), carried.end()).size() == 10);
        EvaluationLedger ledger;
        StageResult s2 = run_stage(large, carried, fields.stages[1], baseline, ledger, backend);
        CHECK(s2.generated_count == 7200); // 10 * (2*2*5*6*6)
        CHECK(ledger.raw_requests() == 7200);
    }

    SUBCASE("single-variable group with one option re-extracts the carry") {
        DesignSpace s = tiny_space({1, 3});
        test::FnBackend fn(2, [](const DesignVector& v) {
            return ObjectiveVector{static_cast<double>(v[1]), 2.0 - v[1]};
        });
        std::vector<DesignVector> carried = {dv({0, 0}), dv({0, 2})};
        EvaluationLedger ledger;
        StageResult r = run_stage(s, carried, {0}, dv({0, 0}), ledger, fn);
        CHECK(r.generated_count == carried.size());
        CHECK(r.pareto.size() == 2); // both are mutually non-dominated
    }
}

TEST_CASE("initial run on a single all-variable group equals the full factorial") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        DesignSpace space = make_benchmark_space(5, 2, 4, seed);
        BenchmarkBackend backend(space, {BenchmarkFamily::random_table, 2, seed, 0.0});
        EvaluationLedger oracle_ledger;
        ParetoSet oracle = run_full_factorial(space, oracle_ledger, backend);
        EvaluationLedger ledger;
        RunTrace trace = run_initial(space, config_for(space, single_group(space),
                                                       {"low", BoundPolicy::low, 0, {}}),
                                     ledger, backend);
        CHECK(trace.final_set == oracle);
        CHECK(ledger.unique_evaluations() == *space.combination_count());

        // sanity: the library path agrees with the brute-force oracle too
        CHECK(oracle == test::global_front_oracle(space, backend));
    }
}

TEST_CASE("separable objectives make the ungrouped initial run exact") {
    for (std::uint64_t seed : {10u, 11u, 12u, 13u}) {
        DesignSpace space = make_benchmark_space(6, 2, 4, seed);
        BenchmarkBackend backend(space, {BenchmarkFamily::separable, 2, seed, 0.0});
        EvaluationLedger oracle_ledger;
        ParetoSet oracle = run_full_factorial(space, oracle_ledger, backend);
        EvaluationLedger ledger;
        RunTrace trace = run_initial(space, config_for(space, ungrouped(space),
                                                       {"middle", BoundPolicy::middle, 0, {}}),
                                     ledger, backend);
        for (const ParetoEntry& g : oracle) CHECK(trace.final_set.contains(g.vec));
        CHECK(trace.final_set.size() == oracle.size());
    }
}

TEST_CASE("evaluation accounting identity") {
    DesignSpace space = make_benchmark_space(6, 2, 4, 21);
    BenchmarkBackend backend(space, {BenchmarkFamily::random_table, 2, 21, 0.0});
    for (const GroupingScheme& g : {ungrouped(space), element_grouped(space), field_grouped(space)}) {
        EvaluationLedger ledger;
        RunTrace trace = run_initial(space, config_for(space, g, {"low", BoundPolicy::low, 0, {}}),
                                     ledger, backend);
        // raw_requests == sum over stages of |P_{z-1}| * prod options
        std::uint64_t expect = 0;
        std::uint64_t carried = 1;
        for (std::size_t z = 0; z < g.stages.size(); ++z) {
            std::uint64_t block = 1;
            for (std::size_t pos : g.stages[z]) block *= space.option_count(pos);
            CHECK(trace.stages[z].generated_count == carried * block);
            expect += carried * block;
            carried = trace.stages[z].pareto.size();
        }
        CHECK(ledger.raw_requests() == expect);
    }
}

TEST_CASE("stage invariants: conservation and carry-forward") {
    DesignSpace space = make_benchmark_space(6, 2, 4, 33);
    BenchmarkBackend backend(space, {BenchmarkFamily::random_table, 2, 33, 0.0});
    GroupingScheme g = element_grouped(space);
    DesignVector baseline = resolve_bound(space, {"upper", BoundPolicy::upper, 0, {}});
    EvaluationLedger ledger;
    RunTrace trace = run_pass(space, g, baseline, ledger, backend, 1, false);

    std::vector<bool> optimized(space.variable_count(), false);
    std::vector<DesignVector> prev{baseline};
    for (std::size_t z = 0; z < g.stages.size(); ++z) {
        for (std::size_t pos : g.stages[z]) optimized[pos] = true;
        for (const ParetoEntry& e : trace.stages[z].pareto) {
            // conservation: future variables still at baseline
            for (std::size_t i = 0; i < space.variable_count(); ++i)
                if (!optimized[i]) CHECK(e.vec[i] == baseline[i]);
            // carry-forward: non-stage coordinates extend a previous member
            bool extends = false;
            for (const DesignVector& p : prev) {
                bool match = true;
                for (std::size_t i = 0; i < space.variable_count() && match; ++i) {
                    bool current_stage = false;
                    for (std::size_t pos : g.stages[z]) current_stage = current_stage || pos == i;
                    if (!current_stage && e.vec[i] != p[i]) match = false;
                }
                extends = extends || match;
            }
            CHECK(extends);
        }
        prev.clear();
        for (const ParetoEntry& e : trace.stages[z].pareto) prev.push_back(e.vec);
    }
}

TEST_CASE("iterative run seeds one pass per initial optimum and never regresses") {
    int regressions = 0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        DesignSpace space = make_benchmark_space(6, 2, 4, seed);
        BenchmarkBackend backend(space, {BenchmarkFamily::random_table, 2, seed, 0.0});
        EvaluationLedger oracle_ledger;
        ParetoSet oracle = run_full_factorial(space, oracle_ledger, backend);
        for (const GroupingScheme& g :
             {ungrouped(space), element_grouped(space), field_grouped(space)}) {
            EvaluationLedger ledger;
            SequentialResult res = run_sequential(
                space, config_for(space, g, {"low", BoundPolicy::low, 0, {}}), ledger, backend);
            CHECK(res.passes.size() == res.initial.final_set.size());
            std::size_t init_found = 0, iter_found = 0;
            for (const ParetoEntry& e : res.initial.final_set)
                if (oracle.contains(e.vec)) ++init_found;
            for (const ParetoEntry& e : res.final_set)
                if (oracle.contains(e.vec)) ++iter_found;
            if (iter_found < init_found) ++regressions;
        }
    }
    CHECK(regressions == 0);
}

TEST_CASE("iterative run is a fixed point when the initial run is exact") {
    // single objective: the single-group initial run finds the optimum
    DesignSpace space = tiny_space({3, 3, 3});
    test::FnBackend fn(1, [](const DesignVector& v) {
        return ObjectiveVector{static_cast<double>(v[0]) + v[1] + v[2]};
    });
    EvaluationLedger ledger;
    SequentialResult res = run_sequential(
        space, config_for(space, single_group(space), {"upper", BoundPolicy::upper, 0, {}}),
        ledger, fn);
    CHECK(res.final_set == res.initial.final_set);
    REQUIRE(res.final_set.size() == 1);
    CHECK(res.final_set[0].vec == dv({0, 0, 0}));
}

TEST_CASE("deeper iterative rounds only tighten the front") {
    DesignSpace space = make_benchmark_space(5, 2, 4, 71);
    BenchmarkBackend backend(space, {BenchmarkFamily::random_table, 2, 71, 0.0});
    GroupingScheme g = ungrouped(space);
    StartingBound rnd{"random", BoundPolicy::random, 7, {}};
    EvaluationLedger l1, l2, lo;
    SequentialResult d1 = run_sequential(space, config_for(space, g, rnd, 1), l1, backend);
    SequentialResult d2 = run_sequential(space, config_for(space, g, rnd, 3), l2, backend);
    ParetoSet oracle = run_full_factorial(space, lo, backend);
    std::size_t f1 = 0, f2 = 0;
    for (const ParetoEntry& e : d1.final_set)
        if (oracle.contains(e.vec)) ++f1;
    for (const ParetoEntry& e : d2.final_set)
        if (oracle.contains(e.vec)) ++f2;
    CHECK(f2 >= f1);
}

TEST_CASE("run_full_factorial basics") {
    SUBCASE("single-variable space is its option sweep") {
        DesignSpace s = tiny_space({5});
        test::FnBackend fn(2, [](const DesignVector& v) {
            return ObjectiveVector{static_cast<double>(v[0]), 4.0 - v[0]};
        });
        EvaluationLedger ledger;
        ParetoSet front = run_full_factorial(s, ledger, fn);
        CHECK(ledger.unique_evaluations() == 5);
        CHECK(front.size() == 5); // a pure trade-off line keeps every point
    }
    SUBCASE("budget cap refuses with the required count") {
        DesignSpace large = make_case_study_space(CaseStudyScale::large);
        BenchmarkBackend backend(large, {BenchmarkFamily::random_table, 2, 1, 0.0});
        EvaluationLedger ledger;
        try {
            run_full_factorial(large, ledger, backend, 100000);
            FAIL("expected BudgetError");
        } catch (const BudgetError& e) {
            CHECK(e.required == 1036800);
            CHECK(e.cap == 100000);
        }
        CHECK(ledger.raw_requests() == 0);
    }
    SUBCASE("medium case-study factorial needs exactly 345600 unique evaluations") {
        DesignSpace medium = make_case_study_space(CaseStudyScale::medium);
        SurrogateBackend surrogate(medium, default_surrogate_coefficients());
        EvaluationLedger ledger;
        ParetoSet front = run_full_factorial(medium, ledger, surrogate, 20'000'000, 4);
        CHECK(ledger.unique_evaluations() == 345600);
        CHECK(ledger.raw_requests() == 345600);
        CHECK(front.size() >= 2);
    }
}

TEST_CASE("sequential runs are deterministic and thread-count independent") {
    DesignSpace space = make_case_study_space(CaseStudyScale::very_small);
    SurrogateBackend backend(space, default_surrogate_coefficients());
    GroupingScheme g = element_grouped(space);
    StartingBound b{"random", BoundPolicy::random, 12345, {}};
    EvaluationLedger l1, l2;
    SequentialResult r1 = run_sequential(space, config_for(space, g, b), l1, backend, 1);
    SequentialResult r2 = run_sequential(space, config_for(space, g, b), l2, backend, 8);
    CHECK(r1.final_set == r2.final_set);
    CHECK(r1.after_iterative == r2.after_iterative);
    CHECK(r1.passes.size() == r2.passes.size());
    for (std::size_t i = 0; i < r1.passes.size(); ++i) {
        CHECK(r1.passes[i].seed_vector == r2.passes[i].seed_vector);
        CHECK(r1.passes[i].final_set == r2.passes[i].final_set);
    }
}
