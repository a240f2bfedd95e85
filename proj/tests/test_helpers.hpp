#pragma once

// Shared test fixtures: tiny spaces, counting backends, and brute-force
// oracles kept independent of the library's implementation paths.

#include <functional>
#include <vector>

#include "seqopt/benchmark.hpp"
#include "seqopt/design_space.hpp"
#include "seqopt/objective.hpp"
#include "seqopt/pareto.hpp"

namespace seqopt::test {

inline DesignVector dv(std::initializer_list<int> xs) {
    DesignVector v;
    for (int x : xs) v.idx.push_back(static_cast<OptionIndex>(x));
    return v;
}

inline DesignSpace tiny_space(std::vector<std::size_t> option_counts) {
    std::vector<VariableSpec> vars;
    for (std::size_t i = 0; i < option_counts.size(); ++i) {
        VariableSpec v;
        v.name = "x" + std::to_string(i + 1);
        for (std::size_t k = 0; k < option_counts[i]; ++k)
            v.options.push_back("o" + std::to_string(k));
        bool first_half = i < (option_counts.size() + 1) / 2;
        v.element = first_half ? (i % 2 ? ElementTag::fabric : ElementTag::geometry)
                               : (i % 2 ? ElementTag::controls : ElementTag::hvac);
        v.field = first_half ? FieldTag::architecture : FieldTag::engineering;
        vars.push_back(std::move(v));
    }
    return DesignSpace(std::move(vars));
}

/// Backend defined by a lambda over the design vector; counts invocations.
class FnBackend : public ObjectiveBackend {
public:
    FnBackend(std::size_t m, std::function<ObjectiveVector(const DesignVector&)> fn)
        : m_(m), fn_(std::move(fn)) {}
    std::size_t objective_count() const override { return m_; }
    ObjectiveVector evaluate(const DesignVector& v) const override {
        ++calls;
        return fn_(v);
    }
    mutable std::size_t calls = 0;

private:
    std::size_t m_;
    std::function<ObjectiveVector(const DesignVector&)> fn_;
};

/// Independent oracle: every vector of the space by nested iteration.
inline std::vector<DesignVector> all_vectors_oracle(const DesignSpace& space) {
    std::vector<DesignVector> out;
    DesignVector v;
    v.idx.assign(space.variable_count(), 0);
    while (true) {
        out.push_back(v);
        std::size_t i = space.variable_count();
        while (i > 0) {
            --i;
            if (v[i] + 1u < space.option_count(i)) {
                v[i]++;
                break;
            }
            v[i] = 0;
            if (i == 0) return out;
        }
        if (space.variable_count() == 0) return out;
    }
}

/// Independent O(n^2) non-dominated oracle over deduplicated entries.
inline std::vector<ParetoEntry> pareto_oracle(std::vector<ParetoEntry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const ParetoEntry& a, const ParetoEntry& b) { return a.vec < b.vec; });
    entries.erase(std::unique(entries.begin(), entries.end(),
                              [](const ParetoEntry& a, const ParetoEntry& b) { return a.vec == b.vec; }),
                  entries.end());
    auto dominated = [&](const ParetoEntry& e) {
        for (const ParetoEntry& other : entries) {
            if (other.vec == e.vec) continue;
            bool all_le = true, one_lt = false;
            for (std::size_t k = 0; k < e.obj.size(); ++k) {
                if (other.obj[k] > e.obj[k]) all_le = false;
                if (other.obj[k] < e.obj[k]) one_lt = true;
            }
            if (all_le && one_lt) return true;
        }
        return false;
    };
    std::vector<ParetoEntry> out;
    for (const ParetoEntry& e : entries)
        if (!dominated(e)) out.push_back(e);
    return out;
}

/// Full-factorial global front via the oracles above (no library search path).
inline ParetoSet global_front_oracle(const DesignSpace& space, const ObjectiveBackend& backend) {
    std::vector<ParetoEntry> entries;
    for (const DesignVector& v : all_vectors_oracle(space))
        entries.push_back({v, backend.evaluate(v)});
    std::vector<ParetoEntry> front = pareto_oracle(std::move(entries));
    return ParetoSet::extract(std::move(front));
}

} // namespace seqopt::test
