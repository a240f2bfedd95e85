#include <doctest.h>

#include <set>
#include <thread>

#include "seqopt/benchmark.hpp"
#include "seqopt/objective.hpp"
#include "seqopt/table_backend.hpp"
#include "test_helpers.hpp"

using namespace seqopt;
using test::dv;
using test::tiny_space;

TEST_CASE("ledger memoizes and counts") {
    DesignSpace space = tiny_space({3, 3});
    test::FnBackend backend(1, [](const DesignVector& v) {
        return ObjectiveVector{static_cast<double>(v[0] * 3 + v[1])};
    });
    EvaluationLedger ledger;

    ObjectiveVector a = ledger.evaluate(backend, dv({1, 2}));
    ObjectiveVector b = ledger.evaluate(backend, dv({1, 2}));
    CHECK(a == b);
    CHECK(ledger.raw_requests() == 2);
    CHECK(ledger.unique_evaluations() == 1);
    CHECK(backend.calls == 1); // memo hit never re-invokes the backend

    ledger.evaluate(backend, dv({0, 0}));
    ledger.evaluate(backend, dv({2, 2}));
    CHECK(ledger.unique_evaluations() == 3);
    CHECK(ledger.raw_requests() == 4);
}

TEST_CASE("batch_evaluate is schedule-independent") {
    DesignSpace space = tiny_space({6, 6, 6});
    BenchmarkBackend backend(space, {BenchmarkFamily::random_table, 2, 123, 0.0});
    std::vector<DesignVector> batch;
    for (const DesignVector& v : test::all_vectors_oracle(space)) {
        batch.push_back(v);
        batch.push_back(v); // duplicates inside one batch
    }
    LedgerCounts counts1, counts4;
    std::vector<ObjectiveVector> out1, out4;
    {
        EvaluationLedger ledger;
        batch_evaluate(ledger, backend, batch, &out1, 1);
        counts1 = ledger.counts();
    }
    {
        EvaluationLedger ledger;
        batch_evaluate(ledger, backend, batch, &out4, 4);
        counts4 = ledger.counts();
    }
    CHECK(counts1 == counts4);
    CHECK(counts1.raw_requests == batch.size());
    CHECK(counts1.unique_evaluations == 216);
    CHECK(out1 == out4);
}

TEST_CASE("concurrent single evaluations stay consistent") {
    DesignSpace space = tiny_space({4, 4});
    test::FnBackend backend(1, [](const DesignVector& v) {
        return ObjectiveVector{static_cast<double>(v[0]) + 10.0 * v[1]};
    });
    EvaluationLedger ledger;
    auto vectors = test::all_vectors_oracle(space);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&] {
            for (const DesignVector& v : vectors) ledger.evaluate(backend, v);
        });
    for (auto& th : threads) th.join();
    CHECK(ledger.raw_requests() == 4 * vectors.size());
    CHECK(ledger.unique_evaluations() == vectors.size());
}

TEST_CASE("backend errors carry the offending vector") {
    DesignSpace space = tiny_space({2, 2});
    TableBackend table(space,
                       {{"x1", "x2", "f1"}, {"o0", "o0", "1.5"}, {"o0", "o1", "2.5"}},
                       {"f1"});
    EvaluationLedger ledger;
    CHECK(ledger.evaluate(table, dv({0, 1})) == ObjectiveVector{2.5});
    try {
        ledger.evaluate(table, dv({1, 1}));
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.vector == dv({1, 1}));
        CHECK(std::string(e.what()).find("unevaluated design vector") != std::string::npos);
        CHECK(std::string(e.what()).find("o1") != std::string::npos);
    }
}

TEST_CASE("benchmark families") {
    DesignSpace space = tiny_space({4, 3, 4, 3});

    SUBCASE("random_table is deterministic per seed") {
        BenchmarkBackend a(space, {BenchmarkFamily::random_table, 2, 5, 0.0});
        BenchmarkBackend b(space, {BenchmarkFamily::random_table, 2, 5, 0.0});
        BenchmarkBackend c(space, {BenchmarkFamily::random_table, 2, 6, 0.0});
        bool any_diff = false;
        for (const DesignVector& v : test::all_vectors_oracle(space)) {
            CHECK(a.evaluate(v) == b.evaluate(v));
            any_diff = any_diff || a.evaluate(v) != c.evaluate(v);
        }
        CHECK(any_diff);
    }
    SUBCASE("sphere with opposing optima has a conflicting front") {
        BenchmarkBackend sphere(space, {BenchmarkFamily::sphere, 2, 0, 0.0});
        ParetoSet front = test::global_front_oracle(space, sphere);
        CHECK(front.size() > 1);
        DesignVector zero = dv({0, 0, 0, 0});
        DesignVector one = dv({3, 2, 3, 2});
        CHECK(front.contains(zero));
        CHECK(front.contains(one));
    }
    SUBCASE("separable objective decomposes over variables") {
        BenchmarkBackend sep(space, {BenchmarkFamily::separable, 2, 11, 0.0});
        // f(v) - f(v with one gene changed) must not depend on the other genes
        DesignVector a = dv({0, 0, 0, 0});
        DesignVector b = dv({2, 0, 0, 0});
        DesignVector a2 = dv({0, 2, 1, 2});
        DesignVector b2 = dv({2, 2, 1, 2});
        for (std::size_t k = 0; k < 2; ++k) {
            double d1 = sep.evaluate(b)[k] - sep.evaluate(a)[k];
            double d2 = sep.evaluate(b2)[k] - sep.evaluate(a2)[k];
            CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));
        }
    }
    SUBCASE("interaction weight breaks separability") {
        BenchmarkBackend sep(space, {BenchmarkFamily::separable, 2, 11, 0.5});
        DesignVector a = dv({0, 0, 0, 0});
        DesignVector b = dv({2, 0, 0, 0});
        DesignVector a2 = dv({0, 2, 1, 2});
        DesignVector b2 = dv({2, 2, 1, 2});
        double d1 = sep.evaluate(b)[0] - sep.evaluate(a)[0];
        double d2 = sep.evaluate(b2)[0] - sep.evaluate(a2)[0];
        CHECK(d1 != doctest::Approx(d2).epsilon(1e-12));
    }
}

TEST_CASE("table backend round-trips CSV exactly") {
    DesignSpace space = tiny_space({3, 2, 3});
    BenchmarkBackend source(space, {BenchmarkFamily::random_table, 2, 77, 0.0});
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"x1", "x2", "x3", "f1", "f2"});
    for (const DesignVector& v : test::all_vectors_oracle(space)) {
        auto labels = space.labels(v);
        ObjectiveVector obj = source.evaluate(v);
        labels.push_back(format_double(obj[0]));
        labels.push_back(format_double(obj[1]));
        rows.push_back(labels);
    }
    TableBackend table(space, rows, {"f1", "f2"});
    for (const DesignVector& v : test::all_vectors_oracle(space))
        CHECK(table.evaluate(v) == source.evaluate(v));
}
