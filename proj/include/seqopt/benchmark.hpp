#pragma once

// Synthetic benchmark instances for property tests and oracle comparisons:
// a discretized bi-objective sphere with opposing optima, a seeded random
// table, and a separable-plus-pairwise-interaction family whose interaction
// weight dials the difficulty of stagewise optimization.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqopt/design_space.hpp"
#include "seqopt/objective.hpp"
#include "seqopt/rng.hpp"

namespace seqopt {

enum class BenchmarkFamily { sphere, random_table, separable };

inline std::string_view to_string(BenchmarkFamily f) {
    switch (f) {
    case BenchmarkFamily::sphere: return "sphere";
    case BenchmarkFamily::random_table: return "random_table";
    default: return "separable";
    }
}

inline std::optional<BenchmarkFamily> parse_benchmark_family(std::string_view s) {
    if (s == "sphere") return BenchmarkFamily::sphere;
    if (s == "random_table") return BenchmarkFamily::random_table;
    if (s == "separable") return BenchmarkFamily::separable;
    return std::nullopt;
}

struct BenchmarkParams {
    BenchmarkFamily family = BenchmarkFamily::random_table;
    std::size_t objectives = 2;
    std::uint64_t seed = 0;
    double interaction_weight = 0.0; // separable family only
};

/// Deterministic space generator for benchmark instances. Tags alternate
/// geometry/fabric over the first half (architecture) and hvac/controls over
/// the second (engineering), so all built-in groupings are exercised.
inline DesignSpace make_benchmark_space(std::size_t variables, std::size_t min_options,
                                        std::size_t max_options, std::uint64_t seed) {
    if (variables == 0 || min_options == 0 || max_options < min_options)
        throw std::invalid_argument("make_benchmark_space: bad shape parameters");
    Rng rng(derive_seed(seed, "benchmark-space"));
    std::vector<VariableSpec> vars;
    for (std::size_t i = 0; i < variables; ++i) {
        std::size_t m = min_options + rng.below(max_options - min_options + 1);
        VariableSpec v;
        v.name = "v" + std::to_string(i + 1);
        for (std::size_t k = 0; k < m; ++k) v.options.push_back("o" + std::to_string(k));
        bool first_half = i < (variables + 1) / 2;
        if (first_half) {
            v.element = (i % 2 == 0) ? ElementTag::geometry : ElementTag::fabric;
            v.field = FieldTag::architecture;
        } else {
            v.element = (i % 2 == 0) ? ElementTag::hvac : ElementTag::controls;
            v.field = FieldTag::engineering;
        }
        vars.push_back(std::move(v));
    }
    return DesignSpace(std::move(vars));
}

/// Pure hash-based backend; no table is materialized, so instances of any
/// size cost O(1) memory and evaluation is deterministic in (params, vector).
class BenchmarkBackend : public ObjectiveBackend {
public:
    BenchmarkBackend(const DesignSpace& space, BenchmarkParams params)
        : space_(&space), params_(params) {
        if (params_.objectives == 0)
            throw std::invalid_argument("benchmark: needs at least one objective");
    }

    std::size_t objective_count() const override { return params_.objectives; }

    ObjectiveVector evaluate(const DesignVector& v) const override {
        if (v.size() != space_->variable_count())
            throw BackendError("benchmark: design vector arity mismatch", v);
        ObjectiveVector out(params_.objectives);
        switch (params_.family) {
        case BenchmarkFamily::sphere: sphere(v, out); break;
        case BenchmarkFamily::random_table: random_table(v, out); break;
        case BenchmarkFamily::separable: separable(v, out); break;
        }
        return out;
    }

private:
    // distance-squared to m anchor points spread along the diagonal; for
    // m = 2 the anchors are the all-zero and all-one corners, which forces
    // a conflicting front
    void sphere(const DesignVector& v, ObjectiveVector& out) const {
        std::vector<double> x = encode_normalized(*space_, v);
        for (std::size_t k = 0; k < out.size(); ++k) {
            double anchor = out.size() > 1 ? static_cast<double>(k) / (out.size() - 1) : 0.0;
            double s = 0.0;
            for (double xi : x) s += (xi - anchor) * (xi - anchor);
            out[k] = s;
        }
    }

    double unit_hash(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) const {
        std::uint64_t h = splitmix64(params_.seed ^ splitmix64(a ^ splitmix64(b ^ splitmix64(c ^ d))));
        return static_cast<double>(h >> 11) * 0x1.0p-53;
    }

    // 20 fractional bits: sums of up to a few thousand such terms are exact
    // in double arithmetic, so summation order can never flip a dominance
    // decision between a staged evaluation and a full-vector one
    double grid_hash(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) const {
        std::uint64_t h = splitmix64(params_.seed ^ splitmix64(a ^ splitmix64(b ^ splitmix64(c ^ d))));
        return static_cast<double>(h >> 44) * 0x1.0p-20;
    }

    void random_table(const DesignVector& v, ObjectiveVector& out) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (OptionIndex x : v.idx) {
            h ^= x + 1u;
            h *= 0x100000001b3ull;
        }
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = unit_hash(1, k, h, 0);
    }

    void separable(const DesignVector& v, ObjectiveVector& out) const {
        for (std::size_t k = 0; k < out.size(); ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += grid_hash(2, k, i, v[i]);
            if (params_.interaction_weight != 0.0) {
                for (std::size_t i = 0; i < v.size(); ++i)
                    for (std::size_t j = i + 1; j < v.size(); ++j)
                        s += params_.interaction_weight *
                             grid_hash(3, k, i * 1024 + j, (std::uint64_t(v[i]) << 16) | v[j]);
            }
            out[k] = s;
        }
    }

    const DesignSpace* space_;
    BenchmarkParams params_;
};

} // namespace seqopt
