#pragma once

// The sequential design optimization algorithm: staged full-factorial
// searches with Pareto carry-forward. Each stage exhaustively explores one
// variable group against every solution carried from the previous stage,
// with not-yet-optimized variables pinned to the baseline; only the stage's
// non-dominated set advances. The iterative run repeats the whole sequence
// once per solution of the initial run's final set and extracts the final
// front from the pooled results.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqopt/design_space.hpp"
#include "seqopt/objective.hpp"
#include "seqopt/pareto.hpp"

namespace seqopt {

/// Full-factorial refusal: the space exceeds the configured budget cap.
class BudgetError : public std::runtime_error {
public:
    BudgetError(std::string message, std::uint64_t required, std::uint64_t cap)
        : std::runtime_error(std::move(message)), required(required), cap(cap) {}
    std::uint64_t required;
    std::uint64_t cap;
};

struct SequentialConfig {
    GroupingScheme grouping;
    StartingBound bound;
    int iterative_depth = 1; // 0 = initial run only
};

struct StageResult {
    std::size_t stage_index = 0;        // 1-based z
    std::uint64_t generated_count = 0;  // |P_{z-1}| * prod_{i in stage} m_i
    ParetoSet pareto;
};

struct RunTrace {
    std::vector<StageResult> stages;
    ParetoSet final_set;       // pareto of the last stage
    DesignVector seed_vector;  // resolved baseline of this pass
    bool iterative_pass = false;
    LedgerCounts ledger_after; // cumulative ledger snapshot when the pass ended
};

struct SequentialResult {
    RunTrace initial;
    std::vector<RunTrace> passes;  // iterative passes, in pool order
    ParetoSet final_set;           // initial-only when iterative_depth == 0
    LedgerCounts after_initial;
    LedgerCounts after_iterative;  // == after_initial when iterative_depth == 0
};

/// One stage: combines every carried solution with every combination of the
/// group's options (carried vectors already hold optimized values for past
/// stages and baseline values for future ones), evaluates the whole
/// candidate set through the ledger, and extracts its non-dominated set.
inline StageResult run_stage(const DesignSpace& space, const std::vector<DesignVector>& carried,
                             const std::vector<std::size_t>& group, const DesignVector& baseline,
                             EvaluationLedger& ledger, const ObjectiveBackend& backend,
                             unsigned jobs = 1, std::size_t stage_index = 1) {
    if (carried.empty())
        throw std::logic_error("run_stage: empty carry-forward set");
    if (baseline.size() != space.variable_count())
        throw std::invalid_argument("run_stage: baseline arity mismatch");
    std::vector<DesignVector> candidates;
    {
        StageEnumerator probe(space, group, baseline);
        std::uint64_t expect = probe.total() * carried.size();
        candidates.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(expect, 1u << 22)));
    }
    for (const DesignVector& s : carried) {
        StageEnumerator en(space, group, s);
        DesignVector v;
        while (en.next(v)) candidates.push_back(v);
    }
    std::vector<ObjectiveVector> values;
    batch_evaluate(ledger, backend, candidates, &values, jobs);
    std::vector<ParetoEntry> entries;
    entries.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        entries.push_back({std::move(candidates[i]), std::move(values[i])});
    StageResult result;
    result.stage_index = stage_index;
    result.generated_count = entries.size();
    result.pareto = ParetoSet::extract(std::move(entries));
    return result;
}

/// One full sequential pass from a given baseline vector.
inline RunTrace run_pass(const DesignSpace& space, const GroupingScheme& grouping,
                         const DesignVector& baseline, EvaluationLedger& ledger,
                         const ObjectiveBackend& backend, unsigned jobs, bool iterative_pass) {
    RunTrace trace;
    trace.seed_vector = baseline;
    trace.iterative_pass = iterative_pass;
    std::vector<DesignVector> carried{baseline};
    for (std::size_t z = 0; z < grouping.stages.size(); ++z) {
        StageResult stage = run_stage(space, carried, grouping.stages[z], baseline, ledger,
                                      backend, jobs, z + 1);
        carried = stage.pareto.vectors();
        trace.stages.push_back(std::move(stage));
    }
    trace.final_set = trace.stages.back().pareto;
    trace.ledger_after = ledger.counts();
    return trace;
}

/// Initial run: stage 1 seeds from the resolved starting bound; each later
/// stage consumes only the previous stage's Pareto set.
inline RunTrace run_initial(const DesignSpace& space, const SequentialConfig& config,
                            EvaluationLedger& ledger, const ObjectiveBackend& backend,
                            unsigned jobs = 1) {
    if (auto issues = validate_grouping(space, config.grouping); !issues.empty())
        throw std::invalid_argument("run_initial: " + issues.front());
    DesignVector baseline = resolve_bound(space, config.bound);
    return run_pass(space, config.grouping, baseline, ledger, backend, jobs, false);
}

/// Iterative run: every solution of the completed initial run's final set
/// seeds a full sequential pass; the new final set is extracted from the
/// pool of all pass finals plus the seeds themselves (so the front can only
/// tighten). With iterative_depth > 1 the process repeats on the new final
/// set, stopping early at a fixed point.
inline SequentialResult run_iterative(const DesignSpace& space, RunTrace initial,
                                      const SequentialConfig& config, EvaluationLedger& ledger,
                                      const ObjectiveBackend& backend, unsigned jobs = 1) {
    SequentialResult result;
    result.after_initial = ledger.counts();
    result.final_set = initial.final_set;
    result.initial = std::move(initial);
    for (int depth = 0; depth < config.iterative_depth; ++depth) {
        ParetoSet seeds = result.final_set;
        std::vector<ParetoEntry> pool(seeds.begin(), seeds.end());
        for (const ParetoEntry& seed : seeds) {
            RunTrace pass = run_pass(space, config.grouping, seed.vec, ledger, backend, jobs, true);
            pool.insert(pool.end(), pass.final_set.begin(), pass.final_set.end());
            result.passes.push_back(std::move(pass));
        }
        ParetoSet next = ParetoSet::extract(std::move(pool));
        bool fixed_point = next == result.final_set;
        result.final_set = std::move(next);
        if (fixed_point) break;
    }
    result.after_iterative = ledger.counts();
    return result;
}

/// Initial run followed by the configured iterative rounds.
inline SequentialResult run_sequential(const DesignSpace& space, const SequentialConfig& config,
                                       EvaluationLedger& ledger, const ObjectiveBackend& backend,
                                       unsigned jobs = 1) {
    RunTrace initial = run_initial(space, config, ledger, backend, jobs);
    return run_iterative(space, std::move(initial), config, ledger, backend, jobs);
}

/// Evaluates the whole space and returns the global Pareto set. Streams in
/// chunks so only the running front and one chunk are held besides the memo.
inline ParetoSet run_full_factorial(const DesignSpace& space, EvaluationLedger& ledger,
                                    const ObjectiveBackend& backend,
                                    std::uint64_t budget_cap = 20'000'000, unsigned jobs = 1) {
    auto count = space.combination_count();
    if (!count || *count > budget_cap)
        throw BudgetError("full factorial refused: requires " +
                              (count ? std::to_string(*count) : std::string("more than 2^64")) +
                              " evaluations, cap is " + std::to_string(budget_cap),
                          count.value_or(UINT64_MAX), budget_cap);
    ledger.reserve(static_cast<std::size_t>(*count));
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < space.variable_count(); ++i) all.push_back(i);
    DesignVector base;
    base.idx.assign(space.variable_count(), 0);
    StageEnumerator en(space, all, base);
    constexpr std::size_t kChunk = 65536;
    std::vector<ParetoEntry> pool;
    std::vector<DesignVector> chunk;
    std::vector<ObjectiveVector> values;
    chunk.reserve(kChunk);
    DesignVector v;
    bool more = true;
    while (more) {
        chunk.clear();
        while (chunk.size() < kChunk && (more = en.next(v))) chunk.push_back(v);
        if (chunk.empty()) break;
        batch_evaluate(ledger, backend, chunk, &values, jobs);
        for (std::size_t i = 0; i < chunk.size(); ++i)
            pool.push_back({std::move(chunk[i]), std::move(values[i])});
        ParetoSet front = ParetoSet::extract(std::move(pool));
        pool.assign(front.begin(), front.end());
    }
    return ParetoSet::extract(std::move(pool));
}

} // namespace seqopt
