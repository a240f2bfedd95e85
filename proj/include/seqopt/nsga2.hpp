#pragma once

// NSGA-II baseline on integer-gene encodings, with the repeated-run
// comparison protocol. One logical RNG stream per run keeps results
// reproducible; offspring evaluation goes through the shared batch driver so
// thread count never changes the outcome.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "seqopt/design_space.hpp"
#include "seqopt/metrics.hpp"
#include "seqopt/objective.hpp"
#include "seqopt/pareto.hpp"
#include "seqopt/rng.hpp"

namespace seqopt {

struct GaConfig {
    std::size_t population_size = 30;
    double crossover_p = 0.5;    // per-gene swap probability, uniform crossover
    double mutation_rate = 0.1;  // per-gene resample-to-different probability
    std::uint64_t budget = 0;    // function-evaluation cap (see budget_mode)
    std::uint64_t seed = 0;
    CountMode budget_mode = CountMode::unique;
};

struct Individual {
    DesignVector genome;
    ObjectiveVector objectives;
    std::size_t rank = 0;
    double crowding = 0.0;
};

/// Per-gene mutation: with probability `rate` the gene is resampled
/// uniformly among the *other* options of its variable. Single-option
/// variables never change. A plain bitflip on non-power-of-two option counts
/// would produce invalid designs, hence the resample interpretation.
inline DesignVector mutate(const DesignSpace& space, DesignVector genome, double rate, Rng& rng) {
    for (std::size_t i = 0; i < genome.size(); ++i) {
        if (rng.real() >= rate) continue;
        std::size_t m = space.option_count(i);
        if (m < 2) continue;
        std::uint64_t pick = rng.below(m - 1);
        if (pick >= genome[i]) ++pick;
        genome[i] = static_cast<OptionIndex>(pick);
    }
    return genome;
}

/// Uniform crossover: per gene, with probability p the children swap that
/// gene's parental source; the children are complementary.
inline std::pair<DesignVector, DesignVector> crossover_uniform(const DesignVector& a,
                                                               const DesignVector& b, double p,
                                                               Rng& rng) {
    if (a.size() != b.size())
        throw std::invalid_argument("crossover_uniform: genome arity mismatch");
    DesignVector c1 = a;
    DesignVector c2 = b;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (rng.real() < p) {
            c1[i] = b[i];
            c2[i] = a[i];
        }
    }
    return {std::move(c1), std::move(c2)};
}

namespace detail {

/// Tournament between two population indices: lower rank wins, then larger
/// crowding, then a seeded coin flip.
inline std::size_t tournament(const std::vector<Individual>& pop, std::size_t a, std::size_t b,
                              Rng& rng) {
    if (pop[a].rank != pop[b].rank) return pop[a].rank < pop[b].rank ? a : b;
    if (pop[a].crowding != pop[b].crowding) return pop[a].crowding > pop[b].crowding ? a : b;
    return rng.coin() ? a : b;
}

inline void assign_ranks(std::vector<Individual>& pop) {
    std::vector<ObjectiveVector> objs;
    objs.reserve(pop.size());
    for (const Individual& ind : pop) objs.push_back(ind.objectives);
    RankedPopulation ranked = nondominated_sort_with_crowding(objs);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        pop[i].rank = ranked.rank[i];
        pop[i].crowding = ranked.crowding[i];
    }
}

inline void evaluate_population(std::vector<Individual>& pop, EvaluationLedger& ledger,
                                const ObjectiveBackend& backend, unsigned jobs) {
    std::vector<DesignVector> genomes;
    genomes.reserve(pop.size());
    for (const Individual& ind : pop) genomes.push_back(ind.genome);
    std::vector<ObjectiveVector> values;
    batch_evaluate(ledger, backend, genomes, &values, jobs);
    for (std::size_t i = 0; i < pop.size(); ++i) pop[i].objectives = std::move(values[i]);
}

} // namespace detail

struct Nsga2Result {
    ParetoSet front;       // front 1 of the final population
    LedgerCounts counts;
    std::size_t generations = 0;
};

/// Generational NSGA-II: binary tournament selection, uniform crossover,
/// per-gene mutation, (mu+lambda) environmental selection by fronts with
/// crowding truncation. The initial population is the starting bound plus
/// seeded-uniform fill. Terminates at the first generation boundary where
/// the budget counter is reached (or the whole space has been evaluated).
inline Nsga2Result run_nsga2(const DesignSpace& space, const ObjectiveBackend& backend,
                             const GaConfig& ga, const StartingBound& bound, unsigned jobs = 1) {
    const std::size_t n = ga.population_size;
    if (n < 2) throw std::invalid_argument("run_nsga2: population must hold at least 2 individuals");
    if (ga.budget < n)
        throw std::invalid_argument("run_nsga2: budget " + std::to_string(ga.budget) +
                                    " is smaller than one generation (population " +
                                    std::to_string(n) + ")");
    Rng rng(ga.seed);
    EvaluationLedger ledger;

    std::vector<Individual> pop;
    pop.reserve(n);
    pop.push_back({resolve_bound(space, bound), {}, 0, 0.0});
    for (std::size_t i = 1; i < n; ++i) {
        DesignVector g;
        g.idx.resize(space.variable_count());
        for (std::size_t k = 0; k < g.size(); ++k)
            g[k] = static_cast<OptionIndex>(rng.below(space.option_count(k)));
        pop.push_back({std::move(g), {}, 0, 0.0});
    }
    detail::evaluate_population(pop, ledger, backend, jobs);
    detail::assign_ranks(pop);

    std::uint64_t space_size = space.combination_count().value_or(UINT64_MAX);
    std::size_t generations = 0;
    while (ledger.counts().get(ga.budget_mode) < ga.budget &&
           ledger.counts().unique_evaluations < space_size) {
        // breed lambda = mu offspring
        std::vector<Individual> offspring;
        offspring.reserve(n);
        while (offspring.size() < n) {
            std::size_t p1 = detail::tournament(pop, rng.below(n), rng.below(n), rng);
            std::size_t p2 = detail::tournament(pop, rng.below(n), rng.below(n), rng);
            auto [c1, c2] = crossover_uniform(pop[p1].genome, pop[p2].genome, ga.crossover_p, rng);
            offspring.push_back({mutate(space, std::move(c1), ga.mutation_rate, rng), {}, 0, 0.0});
            if (offspring.size() < n)
                offspring.push_back({mutate(space, std::move(c2), ga.mutation_rate, rng), {}, 0, 0.0});
        }
        detail::evaluate_population(offspring, ledger, backend, jobs);

        // (mu+lambda) environmental selection
        std::vector<Individual> pool = std::move(pop);
        pool.insert(pool.end(), std::make_move_iterator(offspring.begin()),
                    std::make_move_iterator(offspring.end()));
        detail::assign_ranks(pool);
        std::vector<std::size_t> order(pool.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (pool[a].rank != pool[b].rank) return pool[a].rank < pool[b].rank;
            return pool[a].crowding > pool[b].crowding;
        });
        pop.clear();
        for (std::size_t i = 0; i < n; ++i) pop.push_back(std::move(pool[order[i]]));
        detail::assign_ranks(pop);
        ++generations;
    }

    std::vector<ParetoEntry> front1;
    for (const Individual& ind : pop)
        if (ind.rank == 0) front1.push_back({ind.genome, ind.objectives});
    Nsga2Result result;
    result.front = ParetoSet::extract(std::move(front1));
    result.counts = ledger.counts();
    result.generations = generations;
    return result;
}

struct ProtocolRun {
    std::uint64_t seed = 0;
    std::size_t run_index = 0;
    Nsga2Result result;
    std::uint64_t global_found = 0;  // 0 when no oracle was supplied
    double mean_abs_gap = 0.0;       // tie-breaker: mean |f_s - f_g| over matches
};

/// Runs the GA `runs` times with seeds base_seed + index and keeps the
/// `keep` best runs. With an oracle, runs are ranked by global optima found,
/// ties by mean performance difference against the nearest global optimum;
/// without one the ranking falls back to front size. Stable on full ties.
inline std::vector<ProtocolRun> repeated_run_protocol(const DesignSpace& space,
                                                      const ObjectiveBackend& backend,
                                                      const GaConfig& ga, const StartingBound& bound,
                                                      std::size_t runs, std::size_t keep,
                                                      const ParetoSet* global_set,
                                                      unsigned jobs = 1) {
    if (keep > runs)
        throw std::invalid_argument("repeated_run_protocol: keep exceeds run count");
    std::vector<ProtocolRun> all;
    for (std::size_t i = 0; i < runs; ++i) {
        GaConfig cfg = ga;
        cfg.seed = ga.seed + i;
        ProtocolRun run;
        run.seed = cfg.seed;
        run.run_index = i;
        run.result = run_nsga2(space, backend, cfg, bound, jobs);
        if (global_set && !global_set->empty() && !run.result.front.empty()) {
            run.global_found = classify_optima(run.result.front, *global_set).global_found.size();
            PerformanceReport perf = performance_difference(run.result.front, *global_set, space);
            double gap = 0.0;
            std::size_t cnt = 0;
            for (const PerformanceMatch& match : perf.matches)
                for (double d : match.abs_diff) {
                    gap += std::abs(d);
                    ++cnt;
                }
            run.mean_abs_gap = cnt ? gap / static_cast<double>(cnt) : 0.0;
        }
        all.push_back(std::move(run));
    }
    std::stable_sort(all.begin(), all.end(), [&](const ProtocolRun& a, const ProtocolRun& b) {
        if (global_set) {
            if (a.global_found != b.global_found) return a.global_found > b.global_found;
            if (a.mean_abs_gap != b.mean_abs_gap) return a.mean_abs_gap < b.mean_abs_gap;
        }
        if (a.result.front.size() != b.result.front.size())
            return a.result.front.size() > b.result.front.size();
        return a.run_index < b.run_index;
    });
    all.resize(keep);
    return all;
}

} // namespace seqopt
