#pragma once

// Dominance testing, non-dominated extraction, and the ranking/crowding
// machinery shared by the sequential optimizer and NSGA-II. All objectives
// are minimized.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "seqopt/design_space.hpp"

namespace seqopt {

/// m real objective values, all minimized.
using ObjectiveVector = std::vector<double>;

/// Weak Pareto dominance: a <= b componentwise with strict < somewhere.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dominates: objective arity mismatch");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

struct ParetoEntry {
    DesignVector vec;
    ObjectiveVector obj;

    friend bool operator==(const ParetoEntry&, const ParetoEntry&) = default;
};

/// Deduplicated set of mutually non-dominated (vector, objectives) pairs.
/// Iteration order is deterministic: lexicographic by design vector.
/// Distinct vectors with equal objectives are all retained; a "solution"
/// is identified by its design vector, not its objective values.
class ParetoSet {
public:
    ParetoSet() = default;

    /// Extracts the maximal set under `dominates` from arbitrary candidates.
    /// Duplicate vectors are collapsed first (backends are pure, so repeats
    /// carry identical objectives).
    static ParetoSet extract(std::vector<ParetoEntry> candidates) {
        ParetoSet out;
        if (candidates.empty()) return out;
        dedup_by_vector(candidates);
        const std::size_t m = candidates.front().obj.size();
        for (const auto& e : candidates)
            if (e.obj.size() != m)
                throw std::invalid_argument("extract_nondominated: objective arity mismatch");
        if (m == 2)
            out.entries_ = extract_biobjective(std::move(candidates));
        else
            out.entries_ = extract_pairwise(std::move(candidates));
        std::sort(out.entries_.begin(), out.entries_.end(),
                  [](const ParetoEntry& a, const ParetoEntry& b) { return a.vec < b.vec; });
        return out;
    }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const ParetoEntry& operator[](std::size_t i) const { return entries_[i]; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }
    const std::vector<ParetoEntry>& entries() const { return entries_; }

    bool contains(const DesignVector& v) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                                   [](const ParetoEntry& e, const DesignVector& x) { return e.vec < x; });
        return it != entries_.end() && it->vec == v;
    }

    std::vector<DesignVector> vectors() const {
        std::vector<DesignVector> out;
        out.reserve(entries_.size());
        for (const auto& e : entries_) out.push_back(e.vec);
        return out;
    }

    friend bool operator==(const ParetoSet& a, const ParetoSet& b) = default;

private:
    static void dedup_by_vector(std::vector<ParetoEntry>& c) {
        std::sort(c.begin(), c.end(),
                  [](const ParetoEntry& a, const ParetoEntry& b) { return a.vec < b.vec; });
        c.erase(std::unique(c.begin(), c.end(),
                            [](const ParetoEntry& a, const ParetoEntry& b) { return a.vec == b.vec; }),
                c.end());
    }

    // Sort by (f1, f2) and sweep groups of equal f1: within a group only the
    // minimum-f2 entries can survive, and only if that minimum strictly
    // improves on the best f2 seen at smaller f1.
    static std::vector<ParetoEntry> extract_biobjective(std::vector<ParetoEntry> c) {
        std::sort(c.begin(), c.end(), [](const ParetoEntry& a, const ParetoEntry& b) {
            if (a.obj[0] != b.obj[0]) return a.obj[0] < b.obj[0];
            if (a.obj[1] != b.obj[1]) return a.obj[1] < b.obj[1];
            return a.vec < b.vec;
        });
        std::vector<ParetoEntry> out;
        double best = std::numeric_limits<double>::infinity();
        std::size_t i = 0;
        while (i < c.size()) {
            std::size_t j = i;
            while (j < c.size() && c[j].obj[0] == c[i].obj[0]) ++j;
            double gmin = c[i].obj[1];
            for (std::size_t k = i; k < j; ++k) gmin = std::min(gmin, c[k].obj[1]);
            if (gmin < best) {
                for (std::size_t k = i; k < j; ++k)
                    if (c[k].obj[1] == gmin) out.push_back(std::move(c[k]));
                best = gmin;
            }
            i = j;
        }
        return out;
    }

    static std::vector<ParetoEntry> extract_pairwise(std::vector<ParetoEntry> c) {
        std::vector<ParetoEntry> out;
        for (std::size_t i = 0; i < c.size(); ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < c.size() && !dominated; ++j)
                if (j != i && dominates(c[j].obj, c[i].obj)) dominated = true;
            if (!dominated) out.push_back(c[i]);
        }
        return out;
    }

    std::vector<ParetoEntry> entries_;
};

inline ParetoSet extract_nondominated(std::vector<ParetoEntry> candidates) {
    return ParetoSet::extract(std::move(candidates));
}

/// Fast non-dominated sort (Deb et al.): partitions population indices into
/// fronts. Duplicates are ranked individually; equal objectives share a front.
inline std::vector<std::vector<std::size_t>>
nondominated_sort(std::span<const ObjectiveVector> objectives) {
    const std::size_t n = objectives.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(objectives[i], objectives[j])) dominated_by[i].push_back(j);
            else if (dominates(objectives[j], objectives[i])) domination_count[i]++;
        }
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (domination_count[i] == 0) current.push_back(i);
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (std::size_t i : current)
            for (std::size_t j : dominated_by[i])
                if (--domination_count[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

/// Crowding distance within one front; boundary points get +infinity.
/// Objectives with zero range contribute nothing.
inline std::vector<double> crowding_distances(std::span<const ObjectiveVector> objectives,
                                              const std::vector<std::size_t>& front) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> crowd(front.size(), 0.0);
    if (front.empty()) return crowd;
    if (front.size() <= 2) {
        std::fill(crowd.begin(), crowd.end(), inf);
        return crowd;
    }
    const std::size_t m = objectives[front[0]].size();
    std::vector<std::size_t> order(front.size());
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return objectives[front[a]][k] < objectives[front[b]][k];
        });
        double lo = objectives[front[order.front()]][k];
        double hi = objectives[front[order.back()]][k];
        crowd[order.front()] = inf;
        crowd[order.back()] = inf;
        if (hi == lo) continue;
        for (std::size_t i = 1; i + 1 < order.size(); ++i) {
            double gap = objectives[front[order[i + 1]]][k] - objectives[front[order[i - 1]]][k];
            if (crowd[order[i]] != inf) crowd[order[i]] += gap / (hi - lo);
        }
    }
    return crowd;
}

struct RankedPopulation {
    std::vector<std::size_t> rank;      // 0-based front index per individual
    std::vector<double> crowding;       // crowding distance per individual
    std::vector<std::vector<std::size_t>> fronts;
};

/// Ranks + crowding for a whole population (duplicates allowed).
inline RankedPopulation nondominated_sort_with_crowding(std::span<const ObjectiveVector> objectives) {
    RankedPopulation out;
    out.fronts = nondominated_sort(objectives);
    out.rank.assign(objectives.size(), 0);
    out.crowding.assign(objectives.size(), 0.0);
    for (std::size_t f = 0; f < out.fronts.size(); ++f) {
        std::vector<double> c = crowding_distances(objectives, out.fronts[f]);
        for (std::size_t i = 0; i < out.fronts[f].size(); ++i) {
            out.rank[out.fronts[f][i]] = f;
            out.crowding[out.fronts[f][i]] = c[i];
        }
    }
    return out;
}

} // namespace seqopt
