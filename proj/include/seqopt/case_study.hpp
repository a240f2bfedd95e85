#pragma once

// The four problem scales of the open-plan office case study: 11 design
// variables covering geometry, fabric, HVAC system and controls. Variables
// that a scale does not explore are kept as single-option placeholders fixed
// at their nominal value, so every scale exposes the same 11-variable shape.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqopt/design_space.hpp"

namespace seqopt {

enum class CaseStudyScale { very_small, small, medium, large };

inline std::string_view to_string(CaseStudyScale s) {
    switch (s) {
    case CaseStudyScale::very_small: return "very_small";
    case CaseStudyScale::small: return "small";
    case CaseStudyScale::medium: return "medium";
    default: return "large";
    }
}

inline std::optional<CaseStudyScale> parse_case_study_scale(std::string_view s) {
    if (s == "very_small") return CaseStudyScale::very_small;
    if (s == "small") return CaseStudyScale::small;
    if (s == "medium") return CaseStudyScale::medium;
    if (s == "large") return CaseStudyScale::large;
    return std::nullopt;
}

inline DesignSpace make_case_study_space(CaseStudyScale scale) {
    using S = CaseStudyScale;
    auto var = [](std::string name, std::vector<std::string> options, ElementTag e, FieldTag f) {
        return VariableSpec{std::move(name), std::move(options), e, f};
    };
    std::vector<VariableSpec> vars;
    switch (scale) {
    case S::very_small:
        vars = {
            var("shape", {"Rectangle", "Free form"}, ElementTag::geometry, FieldTag::architecture),
            var("wwr", {"25", "50", "95"}, ElementTag::geometry, FieldTag::architecture),
            var("orientation", {"0"}, ElementTag::geometry, FieldTag::architecture),
            var("mass", {"LW", "HW"}, ElementTag::fabric, FieldTag::architecture),
            var("insulation", {"8.5"}, ElementTag::fabric, FieldTag::architecture),
            var("window", {"Double clear", "Triple clear"}, ElementTag::fabric, FieldTag::architecture),
            var("distribution", {"Radiant", "Forced air"}, ElementTag::hvac, FieldTag::engineering),
            var("plant", {"Boiler", "Heat pump"}, ElementTag::hvac, FieldTag::engineering),
            var("supply_temp", {"40"}, ElementTag::hvac, FieldTag::engineering),
            var("setpoint", {"19", "21", "23"}, ElementTag::controls, FieldTag::engineering),
            var("setback", {"12", "14", "16"}, ElementTag::controls, FieldTag::engineering),
        };
        break;
    case S::small:
        vars = {
            var("shape", {"Rectangle", "L-shape", "Free form"}, ElementTag::geometry, FieldTag::architecture),
            var("wwr", {"25", "50", "95"}, ElementTag::geometry, FieldTag::architecture),
            var("orientation", {"0", "45", "90"}, ElementTag::geometry, FieldTag::architecture),
            var("mass", {"LW", "HW"}, ElementTag::fabric, FieldTag::architecture),
            var("insulation", {"8.5", "12.5", "17"}, ElementTag::fabric, FieldTag::architecture),
            var("window", {"Double clear", "Triple clear", "Triple LowE"}, ElementTag::fabric, FieldTag::architecture),
            var("distribution", {"Radiant", "Forced air"}, ElementTag::hvac, FieldTag::engineering),
            var("plant", {"Boiler", "Heat pump"}, ElementTag::hvac, FieldTag::engineering),
            var("supply_temp", {"30", "40", "50"}, ElementTag::hvac, FieldTag::engineering),
            var("setpoint", {"18", "20", "22"}, ElementTag::controls, FieldTag::engineering),
            var("setback", {"11", "13", "15"}, ElementTag::controls, FieldTag::engineering),
        };
        break;
    case S::medium:
        vars = {
            var("shape", {"Rectangle", "L-shape", "Free form"}, ElementTag::geometry, FieldTag::architecture),
            var("wwr", {"25", "50", "75", "95"}, ElementTag::geometry, FieldTag::architecture),
            var("orientation", {"0", "45", "90", "135"}, ElementTag::geometry, FieldTag::architecture),
            var("mass", {"LW", "HW"}, ElementTag::fabric, FieldTag::architecture),
            var("insulation", {"8.5", "10.625", "12.5", "15.625", "17"}, ElementTag::fabric, FieldTag::architecture),
            var("window", {"Double clear", "Triple clear", "Triple LowE"}, ElementTag::fabric, FieldTag::architecture),
            var("distribution", {"Radiant", "Forced air"}, ElementTag::hvac, FieldTag::engineering),
            var("plant", {"Boiler", "Heat pump"}, ElementTag::hvac, FieldTag::engineering),
            var("supply_temp", {"30", "35", "40", "45", "50"}, ElementTag::hvac, FieldTag::engineering),
            var("setpoint", {"19", "21", "23"}, ElementTag::controls, FieldTag::engineering),
            var("setback", {"11", "13", "15", "16"}, ElementTag::controls, FieldTag::engineering),
        };
        break;
    case S::large:
        vars = {
            var("shape", {"Rectangle", "L-shape", "Free form"}, ElementTag::geometry, FieldTag::architecture),
            var("wwr", {"25", "50", "75", "95"}, ElementTag::geometry, FieldTag::architecture),
            var("orientation", {"0", "45", "90", "135"}, ElementTag::geometry, FieldTag::architecture),
            var("mass", {"LW", "HW"}, ElementTag::fabric, FieldTag::architecture),
            var("insulation", {"8.5", "10.625", "12.5", "15.625", "17"}, ElementTag::fabric, FieldTag::architecture),
            var("window", {"Double clear", "Triple clear", "Triple LowE"}, ElementTag::fabric, FieldTag::architecture),
            var("distribution", {"Radiant", "Forced air"}, ElementTag::hvac, FieldTag::engineering),
            var("plant", {"Boiler", "Heat pump"}, ElementTag::hvac, FieldTag::engineering),
            var("supply_temp", {"30", "35", "40", "45", "50"}, ElementTag::hvac, FieldTag::engineering),
            var("setpoint", {"18", "19", "20", "21", "22", "23"}, ElementTag::controls, FieldTag::engineering),
            var("setback", {"11", "12", "13", "14", "15", "16"}, ElementTag::controls, FieldTag::engineering),
        };
        break;
    }
    return DesignSpace(std::move(vars));
}

/// Design-option count the source publication reports for a scale. The
/// very-small and small columns do not multiply out to these figures
/// (864 vs 874 and 52,488 vs 52,400); combination_count() is authoritative.
inline std::uint64_t case_study_reported_count(CaseStudyScale scale) {
    switch (scale) {
    case CaseStudyScale::very_small: return 874;
    case CaseStudyScale::small: return 52400;
    case CaseStudyScale::medium: return 345600;
    default: return 1036800;
    }
}

/// The four published starting bounds for the large-scale space. The middle
/// bound needs explicit overrides for orientation (90), mass (HW) and plant
/// (Heat pump), which deviate from the floor((m-1)/2) rule; the random bound
/// is the published draw, pinned as explicit indices.
inline std::vector<StartingBound> case_study_large_bounds() {
    StartingBound low{"low", BoundPolicy::low, 0, {}};
    StartingBound middle{"middle", BoundPolicy::middle, 0, {{2, 2}, {3, 1}, {7, 1}}};
    StartingBound upper{"upper", BoundPolicy::upper, 0, {}};
    StartingBound random{"random", BoundPolicy::explicit_, 0,
                         {{0, 2}, {1, 2}, {2, 0}, {3, 0}, {4, 1}, {5, 1},
                          {6, 0}, {7, 0}, {8, 3}, {9, 3}, {10, 4}}};
    return {low, middle, upper, random};
}

} // namespace seqopt
