#pragma once

// The evaluation framework: optima classification (global vs search),
// effectiveness, computational load/savings, and per-solution performance
// differences against the nearest global optimum in normalized variable
// space.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "seqopt/design_space.hpp"
#include "seqopt/objective.hpp"
#include "seqopt/pareto.hpp"

namespace seqopt {

/// A search solution counts as "global" iff its design vector is a member of
/// the full-factorial Pareto set; objective-value coincidence is not enough.
struct OptimaClassification {
    std::vector<ParetoEntry> global_found;
    std::vector<ParetoEntry> search_only;
};

inline OptimaClassification classify_optima(const ParetoSet& search, const ParetoSet& global_set) {
    OptimaClassification out;
    for (const ParetoEntry& e : search) {
        if (global_set.contains(e.vec))
            out.global_found.push_back(e);
        else
            out.search_only.push_back(e);
    }
    return out;
}

/// Share of the global optima recovered by the search. Search-only extras do
/// not reduce the value.
inline double effectiveness(std::uint64_t n_found, std::uint64_t n_total) {
    if (n_total == 0)
        throw std::invalid_argument("effectiveness: no global optima to compare against");
    if (n_found > n_total)
        throw std::invalid_argument("effectiveness: found more global optima than exist");
    return static_cast<double>(n_found) / static_cast<double>(n_total);
}

/// Function evaluations of the search relative to the full factorial.
inline double computational_load(std::uint64_t n_eval_search, std::uint64_t n_eval_full) {
    if (n_eval_search == 0 || n_eval_full == 0)
        throw std::invalid_argument("computational_load: evaluation counts must be positive");
    return static_cast<double>(n_eval_search) / static_cast<double>(n_eval_full);
}

inline double computational_savings(std::uint64_t n_eval_search, std::uint64_t n_eval_full) {
    return 1.0 - computational_load(n_eval_search, n_eval_full);
}

struct PerformanceMatch {
    DesignVector search_vec;
    DesignVector matched_global;
    double distance = 0.0;                     // normalized variable-space Euclidean
    std::vector<double> abs_diff;              // f(x_s) - f(x_g), per objective
    std::vector<std::optional<double>> pct_diff; // 100*(f_s - f_g)/f_g; nullopt when f_g == 0
};

struct PerformanceReport {
    std::vector<PerformanceMatch> matches;            // search-set order
    std::vector<double> mean_abs_diff;                // per objective
    std::vector<std::optional<double>> mean_pct_diff; // per objective, over defined entries
};

/// Matches every search solution to the global solution with the least
/// Euclidean distance in the normalized variable domain (ties broken toward
/// the lexicographically smallest vector) and reports objective differences.
inline PerformanceReport performance_difference(const ParetoSet& search, const ParetoSet& global_set,
                                                const DesignSpace& space) {
    if (search.empty() || global_set.empty())
        throw std::invalid_argument("performance_difference: empty Pareto set");
    const std::size_t m = search[0].obj.size();
    PerformanceReport report;
    report.mean_abs_diff.assign(m, 0.0);
    std::vector<double> pct_sum(m, 0.0);
    std::vector<std::size_t> pct_count(m, 0);

    std::vector<std::vector<double>> global_coords;
    global_coords.reserve(global_set.size());
    for (const ParetoEntry& g : global_set)
        global_coords.push_back(encode_normalized(space, g.vec));

    for (const ParetoEntry& s : search) {
        std::vector<double> x = encode_normalized(space, s.vec);
        std::size_t best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t gi = 0; gi < global_set.size(); ++gi) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                double d = x[k] - global_coords[gi][k];
                d2 += d * d;
            }
            // global_set iterates lexicographically, so '<' keeps the
            // lexicographically smallest vector on ties
            if (d2 < best_d2) {
                best_d2 = d2;
                best = gi;
            }
        }
        const ParetoEntry& g = global_set[best];
        PerformanceMatch match;
        match.search_vec = s.vec;
        match.matched_global = g.vec;
        match.distance = std::sqrt(best_d2);
        for (std::size_t k = 0; k < m; ++k) {
            double diff = s.obj[k] - g.obj[k];
            match.abs_diff.push_back(diff);
            if (g.obj[k] != 0.0) {
                double pct = 100.0 * diff / g.obj[k];
                match.pct_diff.emplace_back(pct);
                pct_sum[k] += pct;
                pct_count[k]++;
            } else {
                match.pct_diff.emplace_back(std::nullopt);
            }
            report.mean_abs_diff[k] += diff;
        }
        report.matches.push_back(std::move(match));
    }
    for (std::size_t k = 0; k < m; ++k) {
        report.mean_abs_diff[k] /= static_cast<double>(report.matches.size());
        if (pct_count[k] > 0)
            report.mean_pct_diff.emplace_back(pct_sum[k] / static_cast<double>(pct_count[k]));
        else
            report.mean_pct_diff.emplace_back(std::nullopt);
    }
    return report;
}

/// Everything the report tables need for one search result.
struct MetricsReport {
    std::uint64_t n_global_found = 0;
    std::uint64_t n_search_only = 0;
    std::uint64_t n_global_total = 0;
    double effectiveness = 0.0;
    double precision = 0.0; // n_global_found / |search set|; companion metric, never substituted
    std::uint64_t raw_requests = 0;
    std::uint64_t unique_evaluations = 0;
    std::uint64_t full_factorial_count = 0;
    double computational_load = 0.0;
    double computational_savings = 0.0;
    PerformanceReport performance;
};

inline MetricsReport compute_metrics(const ParetoSet& search, const ParetoSet& global_set,
                                     const DesignSpace& space, LedgerCounts counts,
                                     std::uint64_t full_factorial_count, CountMode mode) {
    MetricsReport r;
    OptimaClassification cls = classify_optima(search, global_set);
    r.n_global_found = cls.global_found.size();
    r.n_search_only = cls.search_only.size();
    r.n_global_total = global_set.size();
    r.effectiveness = effectiveness(r.n_global_found, r.n_global_total);
    r.precision = search.empty() ? 0.0
                                 : static_cast<double>(r.n_global_found) /
                                       static_cast<double>(search.size());
    r.raw_requests = counts.raw_requests;
    r.unique_evaluations = counts.unique_evaluations;
    r.full_factorial_count = full_factorial_count;
    r.computational_load = computational_load(counts.get(mode), full_factorial_count);
    r.computational_savings = 1.0 - r.computational_load;
    r.performance = performance_difference(search, global_set, space);
    return r;
}

} // namespace seqopt
