#pragma once

// Closed-form building-performance surrogate. Evaluates a case-study design
// vector to (heating energy kWh/year, discomfort hours/year). The constants
// are benchmark definition, shipped with the repo; they are chosen so that
// the two objectives conflict and so that option choices interact across
// variables (supply temperature x plant, WWR x glazing, mass x setback).

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqopt/design_space.hpp"
#include "seqopt/objective.hpp"

namespace seqopt {

struct WindowCoefficients {
    double u_value = 0.0;      // W/m2K
    double solar_factor = 0.0; // g-value
};

/// Coefficient table for the surrogate. Option-keyed maps must cover every
/// option label of the evaluated space.
struct SurrogateCoefficients {
    // geometry / envelope
    double envelope_area = 187.2; // m2 opaque+glazed wall area
    double roof_area = 300.0;     // m2
    double vent_conductance = 200.0; // W/K
    double wall_base_resistance = 0.25;  // m2K/W, structure + films
    double roof_base_resistance = 0.35;
    double insulation_conductivity = 0.033; // W/mK
    double roof_thickness_scale = 1.3;      // roof carries thicker insulation

    // climate and schedule
    double mean_outdoor_temp = 6.5; // degC, heating season
    double occupied_hours = 2750.0;
    double unoccupied_hours = 6010.0;
    double solar_aperture = 34000.0; // kWh/yr at full glazing, unit g, unit orientation
    double internal_gains = 8000.0;  // kWh/yr credit

    // comfort model
    double base_discomfort = 90.0; // h/yr
    double comfort_ref_temp = 21.5;
    double cold_penalty = 0.30;  // per K^2 below reference
    double warm_penalty = 0.10;  // per K above reference
    double pickup_penalty = 16.0; // h per K of morning pickup deficit
    double pickup_temp = 15.0;
    double draught_penalty = 170.0; // h at full glazing with reference window
    double reference_window_u = 2.8;

    // option-keyed tables
    std::map<std::string, WindowCoefficients> window;
    std::map<std::string, std::map<std::string, double>> orientation_factor; // [shape][orientation]
    std::map<std::string, double> mass_multiplier;
    std::map<std::string, double> mass_pickup;
    std::map<std::string, std::map<std::string, double>> distribution_factor; // [distribution][supply]
    std::map<std::string, double> distribution_pickup;
    std::map<std::string, std::map<std::string, double>> plant_efficiency;    // [plant][supply]
};

/// The coefficient table shipped as the repo default.
inline SurrogateCoefficients default_surrogate_coefficients() {
    SurrogateCoefficients c;
    c.window = {
        {"Double clear", {2.8, 0.76}},
        {"Triple clear", {2.0, 0.68}},
        {"Triple LowE", {1.23, 0.58}},
    };
    c.orientation_factor = {
        {"Rectangle", {{"0", 1.00}, {"45", 0.80}, {"90", 0.70}, {"135", 0.80}}},
        {"L-shape", {{"0", 0.90}, {"45", 1.10}, {"90", 0.85}, {"135", 0.75}}},
        {"Free form", {{"0", 1.05}, {"45", 1.35}, {"90", 1.00}, {"135", 1.20}}},
    };
    c.mass_multiplier = {{"LW", 1.00}, {"HW", 0.93}};
    c.mass_pickup = {{"LW", 1.0}, {"HW", 2.0}};
    c.distribution_factor = {
        {"Radiant", {{"30", 1.00}, {"35", 1.03}, {"40", 1.08}, {"45", 1.16}, {"50", 1.26}}},
        {"Forced air", {{"30", 1.55}, {"35", 1.35}, {"40", 1.20}, {"45", 1.10}, {"50", 1.04}}},
    };
    c.distribution_pickup = {{"Radiant", 1.6}, {"Forced air", 0.6}};
    c.plant_efficiency = {
        {"Boiler", {{"30", 0.99}, {"35", 0.975}, {"40", 0.955}, {"45", 0.93}, {"50", 0.90}}},
        {"Heat pump", {{"30", 4.8}, {"35", 4.1}, {"40", 3.4}, {"45", 2.7}, {"50", 2.0}}},
    };
    return c;
}

/// Objective backend computing the closed form:
///   w = WWR/100, u_wall = 1/(R0 + t/k), UA = A_env[(1-w)u_wall + w u_win] + A_roof u_roof(t)
///   HDH = h_occ max(0, T_set - T_out) + h_unocc max(0, T_sb - T_out)
///   Q = max(0, (UA + C_vent) HDH/1000 - G_sol w orient(shape,th) g_win - G_int)
///   E = Q mass_mult dist(dist,T_sup) / eff(plant,T_sup)
///   D = D0 (1 + c_cold max(0,T_ref-T_set)^2 + c_warm max(0,T_set-T_ref))
///       + c_pickup max(0,T_pick-T_sb) mass_pick dist_pick + c_draught w u_win/u_ref
/// Binds the coefficient tables to the space's option labels at construction,
/// so evaluation is table lookups plus arithmetic.
class SurrogateBackend : public ObjectiveBackend {
public:
    SurrogateBackend(const DesignSpace& space, SurrogateCoefficients coeffs)
        : space_(&space), coeffs_(std::move(coeffs)) {
        shape_ = find_var("shape");
        wwr_ = find_var("wwr");
        orientation_ = find_var("orientation");
        mass_ = find_var("mass");
        insulation_ = find_var("insulation");
        window_ = find_var("window");
        distribution_ = find_var("distribution");
        plant_ = find_var("plant");
        supply_ = find_var("supply_temp");
        setpoint_ = find_var("setpoint");
        setback_ = find_var("setback");

        bind_numeric(wwr_, wwr_values_);
        bind_numeric(supply_, supply_values_); // labels only, lookups stay label-keyed
        bind_numeric(setpoint_, setpoint_values_);
        bind_numeric(setback_, setback_values_);

        for (const std::string& label : space.variable(insulation_).options) {
            double cm = parse_number(insulation_, label);
            double t = cm / 100.0;
            u_wall_.push_back(1.0 / (coeffs_.wall_base_resistance + t / coeffs_.insulation_conductivity));
            u_roof_.push_back(1.0 / (coeffs_.roof_base_resistance +
                                     t * coeffs_.roof_thickness_scale / coeffs_.insulation_conductivity));
        }
        for (const std::string& label : space.variable(window_).options)
            window_coeffs_.push_back(lookup(coeffs_.window, label, "window"));
        for (const std::string& shape : space.variable(shape_).options) {
            const auto& row = lookup(coeffs_.orientation_factor, shape, "shape");
            std::vector<double> factors;
            for (const std::string& o : space.variable(orientation_).options)
                factors.push_back(lookup(row, o, "orientation"));
            orient_factor_.push_back(std::move(factors));
        }
        for (const std::string& label : space.variable(mass_).options) {
            mass_mult_.push_back(lookup(coeffs_.mass_multiplier, label, "mass"));
            mass_pick_.push_back(lookup(coeffs_.mass_pickup, label, "mass"));
        }
        for (const std::string& dist : space.variable(distribution_).options) {
            const auto& row = lookup(coeffs_.distribution_factor, dist, "distribution");
            std::vector<double> factors;
            for (const std::string& s : space.variable(supply_).options)
                factors.push_back(lookup(row, s, "supply_temp"));
            dist_factor_.push_back(std::move(factors));
            dist_pick_.push_back(lookup(coeffs_.distribution_pickup, dist, "distribution"));
        }
        for (const std::string& plant : space.variable(plant_).options) {
            const auto& row = lookup(coeffs_.plant_efficiency, plant, "plant");
            std::vector<double> effs;
            for (const std::string& s : space.variable(supply_).options)
                effs.push_back(lookup(row, s, "supply_temp"));
            plant_eff_.push_back(std::move(effs));
        }
    }

    std::size_t objective_count() const override { return 2; }
    std::vector<std::string> objective_names() const override {
        return {"heating_kwh", "discomfort_hours"};
    }

    ObjectiveVector evaluate(const DesignVector& v) const override {
        if (v.size() != space_->variable_count())
            throw BackendError("surrogate: design vector arity mismatch", v);
        const SurrogateCoefficients& c = coeffs_;
        double w = wwr_values_[v[wwr_]] / 100.0;
        const WindowCoefficients& win = window_coeffs_[v[window_]];
        double u_wall = u_wall_[v[insulation_]];
        double u_roof = u_roof_[v[insulation_]];
        double ua = c.envelope_area * ((1.0 - w) * u_wall + w * win.u_value) + c.roof_area * u_roof;
        double t_set = setpoint_values_[v[setpoint_]];
        double t_sb = setback_values_[v[setback_]];
        double hdh = c.occupied_hours * std::max(0.0, t_set - c.mean_outdoor_temp) +
                     c.unoccupied_hours * std::max(0.0, t_sb - c.mean_outdoor_temp);
        double solar = c.solar_aperture * w * orient_factor_[v[shape_]][v[orientation_]] * win.solar_factor;
        double q = std::max(0.0, (ua + c.vent_conductance) * hdh / 1000.0 - solar - c.internal_gains);
        double energy = q * mass_mult_[v[mass_]] * dist_factor_[v[distribution_]][v[supply_]] /
                        plant_eff_[v[plant_]][v[supply_]];
        double cold = std::max(0.0, c.comfort_ref_temp - t_set);
        double warm = std::max(0.0, t_set - c.comfort_ref_temp);
        double discomfort = c.base_discomfort * (1.0 + c.cold_penalty * cold * cold + c.warm_penalty * warm) +
                            c.pickup_penalty * std::max(0.0, c.pickup_temp - t_sb) *
                                mass_pick_[v[mass_]] * dist_pick_[v[distribution_]] +
                            c.draught_penalty * w * (win.u_value / c.reference_window_u);
        return {energy, discomfort};
    }

    const SurrogateCoefficients& coefficients() const { return coeffs_; }

private:
    std::size_t find_var(const std::string& name) const {
        auto i = space_->index_of(name);
        if (!i)
            throw std::invalid_argument("surrogate: space lacks required variable '" + name + "'");
        return *i;
    }

    double parse_number(std::size_t var, const std::string& label) const {
        try {
            std::size_t pos = 0;
            double x = std::stod(label, &pos);
            if (pos != label.size()) throw std::invalid_argument(label);
            return x;
        } catch (const std::exception&) {
            throw std::invalid_argument("surrogate: option '" + label + "' of variable '" +
                                        space_->variable(var).name + "' is not numeric");
        }
    }

    void bind_numeric(std::size_t var, std::vector<double>& out) {
        for (const std::string& label : space_->variable(var).options)
            out.push_back(parse_number(var, label));
    }

    template <typename Map>
    static const typename Map::mapped_type& lookup(const Map& m, const std::string& key,
                                                   const char* what) {
        auto it = m.find(key);
        if (it == m.end())
            throw std::invalid_argument(std::string("surrogate: no coefficient for ") + what +
                                        " option '" + key + "'");
        return it->second;
    }

    const DesignSpace* space_;
    SurrogateCoefficients coeffs_;
    std::size_t shape_, wwr_, orientation_, mass_, insulation_, window_;
    std::size_t distribution_, plant_, supply_, setpoint_, setback_;
    std::vector<double> wwr_values_, supply_values_, setpoint_values_, setback_values_;
    std::vector<double> u_wall_, u_roof_;
    std::vector<WindowCoefficients> window_coeffs_;
    std::vector<std::vector<double>> orient_factor_;
    std::vector<double> mass_mult_, mass_pick_;
    std::vector<std::vector<double>> dist_factor_;
    std::vector<double> dist_pick_;
    std::vector<std::vector<double>> plant_eff_;
};

} // namespace seqopt
