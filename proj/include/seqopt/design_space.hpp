#pragma once

// Discrete design spaces: ordered variables with named options, grouping
// schemes that partition variables into sequential stages, starting-bound
// policies, and Cartesian enumeration of stage combinations.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seqopt/rng.hpp"

namespace seqopt {

enum class ElementTag { geometry, fabric, hvac, controls, other };
enum class FieldTag { architecture, engineering, other };

inline std::string_view to_string(ElementTag t) {
    switch (t) {
    case ElementTag::geometry: return "geometry";
    case ElementTag::fabric: return "fabric";
    case ElementTag::hvac: return "hvac";
    case ElementTag::controls: return "controls";
    default: return "other";
    }
}

inline std::string_view to_string(FieldTag t) {
    switch (t) {
    case FieldTag::architecture: return "architecture";
    case FieldTag::engineering: return "engineering";
    default: return "other";
    }
}

inline std::optional<ElementTag> parse_element_tag(std::string_view s) {
    if (s == "geometry") return ElementTag::geometry;
    if (s == "fabric") return ElementTag::fabric;
    if (s == "hvac") return ElementTag::hvac;
    if (s == "controls") return ElementTag::controls;
    if (s == "other") return ElementTag::other;
    return std::nullopt;
}

inline std::optional<FieldTag> parse_field_tag(std::string_view s) {
    if (s == "architecture") return FieldTag::architecture;
    if (s == "engineering") return FieldTag::engineering;
    if (s == "other") return FieldTag::other;
    return std::nullopt;
}

/// One discrete design variable: an ordered list of option labels plus the
/// element/field tags that drive the built-in grouping schemes.
struct VariableSpec {
    std::string name;
    std::vector<std::string> options;
    ElementTag element = ElementTag::other;
    FieldTag field = FieldTag::other;
};

using OptionIndex = std::uint16_t;

/// One complete assignment of an option index per variable, in space order.
/// Equality is componentwise; ordering is lexicographic.
struct DesignVector {
    std::vector<OptionIndex> idx;

    DesignVector() = default;
    explicit DesignVector(std::vector<OptionIndex> v) : idx(std::move(v)) {}

    std::size_t size() const { return idx.size(); }
    OptionIndex operator[](std::size_t i) const { return idx[i]; }
    OptionIndex& operator[](std::size_t i) { return idx[i]; }

    friend bool operator==(const DesignVector& a, const DesignVector& b) = default;
    friend auto operator<=>(const DesignVector& a, const DesignVector& b) = default;
};

struct DesignVectorHash {
    std::size_t operator()(const DesignVector& v) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (OptionIndex x : v.idx) {
            h ^= x;
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(splitmix64(h));
    }
};

/// The universe of design vectors: an ordered list of variables. Declared
/// order defines the stage order used by the built-in groupings.
class DesignSpace {
public:
    DesignSpace() = default;
    explicit DesignSpace(std::vector<VariableSpec> vars) : vars_(std::move(vars)) {}

    std::size_t variable_count() const { return vars_.size(); }
    const VariableSpec& variable(std::size_t i) const { return vars_[i]; }
    const std::vector<VariableSpec>& variables() const { return vars_; }

    std::size_t option_count(std::size_t i) const { return vars_[i].options.size(); }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i].name == name) return i;
        return std::nullopt;
    }

    /// Π m_i without enumeration; nullopt if the product overflows 64 bits.
    std::optional<std::uint64_t> combination_count() const {
        std::uint64_t prod = 1;
        for (const auto& v : vars_) {
            std::uint64_t m = v.options.size();
            if (m == 0) return 0;
            if (prod > UINT64_MAX / m) return std::nullopt;
            prod *= m;
        }
        return prod;
    }

    /// Option labels of a vector, for reports and CSV rows.
    std::vector<std::string> labels(const DesignVector& v) const {
        std::vector<std::string> out;
        out.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(vars_[i].options[v[i]]);
        return out;
    }

    bool contains(const DesignVector& v) const {
        if (v.size() != vars_.size()) return false;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] >= vars_[i].options.size()) return false;
        return true;
    }

private:
    std::vector<VariableSpec> vars_;
};

/// Report-style validation: empty result means the space is well formed.
inline std::vector<std::string> validate_space(const DesignSpace& space) {
    std::vector<std::string> issues;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < space.variable_count(); ++i) {
        const VariableSpec& v = space.variable(i);
        if (v.name.empty())
            issues.push_back("variable " + std::to_string(i) + ": empty name");
        if (std::find(names.begin(), names.end(), v.name) != names.end())
            issues.push_back("duplicate variable name '" + v.name + "'");
        names.push_back(v.name);
        if (v.options.empty())
            issues.push_back("variable '" + v.name + "': empty option list");
        std::vector<std::string> opts = v.options;
        std::sort(opts.begin(), opts.end());
        if (std::adjacent_find(opts.begin(), opts.end()) != opts.end())
            issues.push_back("variable '" + v.name + "': duplicate option label");
    }
    return issues;
}

/// Ordered partition of the variables into sequential stages. Positions are
/// indices into the space; within a stage they are kept in space order.
struct GroupingScheme {
    std::string name;
    std::vector<std::vector<std::size_t>> stages;
};

inline std::vector<std::string> validate_grouping(const DesignSpace& space,
                                                  const GroupingScheme& scheme) {
    std::vector<std::string> issues;
    std::vector<int> seen(space.variable_count(), 0);
    for (std::size_t s = 0; s < scheme.stages.size(); ++s) {
        if (scheme.stages[s].empty())
            issues.push_back("grouping '" + scheme.name + "': stage " + std::to_string(s + 1) +
                             " is empty");
        for (std::size_t pos : scheme.stages[s]) {
            if (pos >= space.variable_count()) {
                issues.push_back("grouping '" + scheme.name + "': variable index out of range");
                continue;
            }
            seen[pos]++;
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i] == 0)
            issues.push_back("grouping '" + scheme.name + "': variable '" +
                             space.variable(i).name + "' not assigned to any stage");
        else if (seen[i] > 1)
            issues.push_back("grouping '" + scheme.name + "': variable '" +
                             space.variable(i).name + "' appears in more than one stage");
    }
    return issues;
}

/// One variable per stage, in declared order.
inline GroupingScheme ungrouped(const DesignSpace& space) {
    GroupingScheme g;
    g.name = "ungrouped";
    for (std::size_t i = 0; i < space.variable_count(); ++i)
        g.stages.push_back({i});
    return g;
}

namespace detail {
template <typename Tag, typename Getter>
GroupingScheme grouped_by(const DesignSpace& space, std::string name,
                          const std::vector<Tag>& order, Getter get) {
    GroupingScheme g;
    g.name = std::move(name);
    for (Tag t : order) {
        std::vector<std::size_t> stage;
        for (std::size_t i = 0; i < space.variable_count(); ++i)
            if (get(space.variable(i)) == t) stage.push_back(i);
        if (!stage.empty()) g.stages.push_back(std::move(stage));
    }
    return g;
}
} // namespace detail

/// Stages follow element order geometry -> fabric -> hvac -> controls;
/// empty tags are skipped.
inline GroupingScheme element_grouped(const DesignSpace& space) {
    return detail::grouped_by(
        space, "element_grouped",
        std::vector<ElementTag>{ElementTag::geometry, ElementTag::fabric, ElementTag::hvac,
                                ElementTag::controls, ElementTag::other},
        [](const VariableSpec& v) { return v.element; });
}

/// Stages follow field order architecture -> engineering.
inline GroupingScheme field_grouped(const DesignSpace& space) {
    return detail::grouped_by(
        space, "field_grouped",
        std::vector<FieldTag>{FieldTag::architecture, FieldTag::engineering, FieldTag::other},
        [](const VariableSpec& v) { return v.field; });
}

/// All variables in a single stage (one stage *is* the full factorial).
inline GroupingScheme single_group(const DesignSpace& space) {
    GroupingScheme g;
    g.name = "single_group";
    g.stages.emplace_back();
    for (std::size_t i = 0; i < space.variable_count(); ++i)
        g.stages[0].push_back(i);
    return g;
}

enum class BoundPolicy { low, middle, upper, random, explicit_ };

inline std::string_view to_string(BoundPolicy p) {
    switch (p) {
    case BoundPolicy::low: return "low";
    case BoundPolicy::middle: return "middle";
    case BoundPolicy::upper: return "upper";
    case BoundPolicy::random: return "random";
    default: return "explicit";
    }
}

inline std::optional<BoundPolicy> parse_bound_policy(std::string_view s) {
    if (s == "low") return BoundPolicy::low;
    if (s == "middle") return BoundPolicy::middle;
    if (s == "upper") return BoundPolicy::upper;
    if (s == "random") return BoundPolicy::random;
    if (s == "explicit") return BoundPolicy::explicit_;
    return std::nullopt;
}

/// Policy resolving the baseline design vector for a sequential run.
/// Explicit per-variable overrides win over the policy value; for the
/// explicit policy they must cover every variable.
struct StartingBound {
    std::string name;
    BoundPolicy policy = BoundPolicy::low;
    std::uint64_t seed = 0;                         // random policy only
    std::map<std::size_t, OptionIndex> overrides;   // variable position -> index
};

inline DesignVector resolve_bound(const DesignSpace& space, const StartingBound& bound) {
    DesignVector v;
    v.idx.resize(space.variable_count());
    Rng rng(bound.seed);
    for (std::size_t i = 0; i < space.variable_count(); ++i) {
        std::size_t m = space.option_count(i);
        switch (bound.policy) {
        case BoundPolicy::low: v[i] = 0; break;
        case BoundPolicy::upper: v[i] = static_cast<OptionIndex>(m - 1); break;
        case BoundPolicy::middle: v[i] = static_cast<OptionIndex>((m - 1) / 2); break;
        case BoundPolicy::random: v[i] = static_cast<OptionIndex>(rng.below(m)); break;
        case BoundPolicy::explicit_:
            if (!bound.overrides.count(i))
                throw std::invalid_argument("bound '" + bound.name + "': explicit policy misses variable '" +
                                            space.variable(i).name + "'");
            v[i] = 0;
            break;
        }
    }
    for (const auto& [pos, val] : bound.overrides) {
        if (pos >= space.variable_count())
            throw std::out_of_range("bound '" + bound.name + "': override for unknown variable index " +
                                    std::to_string(pos));
        if (val >= space.option_count(pos))
            throw std::out_of_range("bound '" + bound.name + "': override index " + std::to_string(val) +
                                    " out of range for variable '" + space.variable(pos).name + "'");
        v[pos] = val;
    }
    return v;
}

/// Normalized coordinates: index_i / (m_i - 1), 0 for singleton variables.
inline std::vector<double> encode_normalized(const DesignSpace& space, const DesignVector& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t m = space.option_count(i);
        out[i] = m > 1 ? static_cast<double>(v[i]) / static_cast<double>(m - 1) : 0.0;
    }
    return out;
}

/// Streams the Π_{i in group} m_i vectors that agree with `base` outside the
/// group, in lexicographic order of the group's option indices (group
/// variables taken in space order, last one fastest). Restartable.
class StageEnumerator {
public:
    StageEnumerator(const DesignSpace& space, std::vector<std::size_t> group, DesignVector base)
        : space_(&space), group_(std::move(group)), base_(std::move(base)) {
        std::sort(group_.begin(), group_.end());
        total_ = 1;
        for (std::size_t pos : group_) {
            if (pos >= space.variable_count())
                throw std::invalid_argument("stage group: variable index out of range");
            total_ *= space.option_count(pos);
        }
        if (base_.size() != space.variable_count())
            throw std::invalid_argument("stage enumeration: base vector arity mismatch");
        reset();
    }

    std::uint64_t total() const { return total_; }

    void reset() {
        current_ = base_;
        for (std::size_t pos : group_) current_[pos] = 0;
        done_ = false;
        fresh_ = true;
    }

    /// Fills `out` with the next vector; returns false when exhausted.
    bool next(DesignVector& out) {
        if (done_) return false;
        if (fresh_) {
            fresh_ = false;
            out = current_;
            if (group_.empty()) done_ = true;
            return true;
        }
        // odometer increment, last group variable fastest
        for (std::size_t k = group_.size(); k-- > 0;) {
            std::size_t pos = group_[k];
            if (current_[pos] + 1u < space_->option_count(pos)) {
                current_[pos]++;
                out = current_;
                return true;
            }
            current_[pos] = 0;
        }
        done_ = true;
        return false;
    }

private:
    const DesignSpace* space_;
    std::vector<std::size_t> group_;
    DesignVector base_;
    DesignVector current_;
    std::uint64_t total_ = 1;
    bool done_ = false;
    bool fresh_ = true;
};

/// Contract-checked form: `fixed` must assign exactly the complement of
/// `group`. Overlap or gap is a contract violation.
inline std::vector<DesignVector> enumerate_stage(const DesignSpace& space,
                                                 const std::vector<std::size_t>& group,
                                                 const std::map<std::size_t, OptionIndex>& fixed) {
    std::vector<bool> in_group(space.variable_count(), false);
    for (std::size_t pos : group) {
        if (pos >= space.variable_count())
            throw std::invalid_argument("enumerate_stage: group index out of range");
        in_group[pos] = true;
    }
    DesignVector base;
    base.idx.assign(space.variable_count(), 0);
    for (const auto& [pos, val] : fixed) {
        if (pos >= space.variable_count())
            throw std::invalid_argument("enumerate_stage: fixed index out of range");
        if (in_group[pos])
            throw std::invalid_argument("enumerate_stage: variable '" + space.variable(pos).name +
                                        "' is both in the group and fixed");
        if (val >= space.option_count(pos))
            throw std::out_of_range("enumerate_stage: fixed option index out of range");
        base[pos] = val;
    }
    for (std::size_t i = 0; i < space.variable_count(); ++i)
        if (!in_group[i] && !fixed.count(i))
            throw std::invalid_argument("enumerate_stage: variable '" + space.variable(i).name +
                                        "' neither in the group nor fixed");
    std::vector<DesignVector> out;
    StageEnumerator en(space, group, base);
    out.reserve(static_cast<std::size_t>(en.total()));
    DesignVector v;
    while (en.next(v)) out.push_back(v);
    return out;
}

} // namespace seqopt
