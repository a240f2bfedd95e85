#pragma once

// Enhanced Morris elementary-effects screening over the discrete design
// space. Builds a pool of random one-at-a-time trajectories on the
// normalized grid, greedily keeps the r most dispersed ones (sum of
// pairwise point distances), and estimates mu* and sigma per variable per
// objective from the r elementary effects.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqopt/design_space.hpp"
#include "seqopt/objective.hpp"
#include "seqopt/rng.hpp"

namespace seqopt {

struct MorrisPlan {
    std::size_t trajectories = 20;   // r
    std::size_t candidate_pool = 100; // M
    std::uint64_t seed = 0;
};

/// One OAT trajectory: n+1 grid points; step t changes exactly variable
/// step_variable[t] by the signed normalized step step_delta[t].
struct MorrisTrajectory {
    std::vector<DesignVector> points;
    std::vector<std::size_t> step_variable;
    std::vector<double> step_delta;
};

/// Index step per variable: floor(m/2) grid cells, i.e. the standard Morris
/// Delta = p/(2(p-1)) for even level counts and the nearest on-grid step
/// below it for odd ones.
inline std::size_t morris_index_step(std::size_t m) {
    return std::max<std::size_t>(1, m / 2);
}

/// Variables screened by the plan: everything with at least two options.
inline std::vector<std::size_t> morris_screened_variables(const DesignSpace& space) {
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i < space.variable_count(); ++i)
        if (space.option_count(i) >= 2) vars.push_back(i);
    return vars;
}

namespace detail {

inline double trajectory_distance(const DesignSpace& space, const MorrisTrajectory& a,
                                  const MorrisTrajectory& b) {
    double total = 0.0;
    for (const DesignVector& p : a.points) {
        std::vector<double> xp = encode_normalized(space, p);
        for (const DesignVector& q : b.points) {
            std::vector<double> xq = encode_normalized(space, q);
            double d2 = 0.0;
            for (std::size_t k = 0; k < xp.size(); ++k) {
                double d = xp[k] - xq[k];
                d2 += d * d;
            }
            total += std::sqrt(d2);
        }
    }
    return total;
}

} // namespace detail

/// Builds plan.candidate_pool random OAT trajectories (random grid start,
/// every screened variable perturbed once by its step in random order,
/// direction random where both fit) and greedily selects the r of them that
/// maximize the summed pairwise dispersion.
inline std::vector<MorrisTrajectory> generate_trajectories(const DesignSpace& space,
                                                           const MorrisPlan& plan) {
    if (plan.trajectories == 0)
        throw std::invalid_argument("morris: needs at least one trajectory");
    if (plan.candidate_pool < plan.trajectories)
        throw std::invalid_argument("morris: candidate pool smaller than trajectory count");
    std::vector<std::size_t> screened = morris_screened_variables(space);
    if (screened.empty())
        throw std::invalid_argument("morris: no variable has two or more options");

    Rng rng(plan.seed);
    std::vector<MorrisTrajectory> pool;
    pool.reserve(plan.candidate_pool);
    for (std::size_t t = 0; t < plan.candidate_pool; ++t) {
        MorrisTrajectory traj;
        DesignVector x;
        x.idx.resize(space.variable_count());
        for (std::size_t i = 0; i < space.variable_count(); ++i)
            x[i] = static_cast<OptionIndex>(rng.below(space.option_count(i)));
        traj.points.push_back(x);
        std::vector<std::size_t> order = screened;
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        for (std::size_t var : order) {
            std::size_t m = space.option_count(var);
            std::size_t step = morris_index_step(m);
            bool can_up = x[var] + step <= m - 1;
            bool can_down = x[var] >= step;
            bool up = can_up && (!can_down || rng.coin());
            double delta = static_cast<double>(step) / static_cast<double>(m - 1);
            if (up) {
                x[var] = static_cast<OptionIndex>(x[var] + step);
                traj.step_delta.push_back(delta);
            } else {
                x[var] = static_cast<OptionIndex>(x[var] - step);
                traj.step_delta.push_back(-delta);
            }
            traj.step_variable.push_back(var);
            traj.points.push_back(x);
        }
        pool.push_back(std::move(traj));
    }
    if (plan.candidate_pool == plan.trajectories) return pool;

    // Campolongo-style greedy selection on summed pairwise dispersion
    std::vector<std::vector<double>> dist(pool.size(), std::vector<double>(pool.size(), 0.0));
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i + 1; j < pool.size(); ++j)
            dist[i][j] = dist[j][i] = detail::trajectory_distance(space, pool[i], pool[j]);

    std::vector<std::size_t> chosen;
    std::vector<bool> used(pool.size(), false);
    // seed with the most distant pair
    std::size_t bi = 0, bj = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i + 1; j < pool.size(); ++j)
            if (dist[i][j] > best) {
                best = dist[i][j];
                bi = i;
                bj = j;
            }
    chosen = {bi, bj};
    used[bi] = used[bj] = true;
    while (chosen.size() < plan.trajectories) {
        std::size_t pick = 0;
        double gain = -1.0;
        for (std::size_t c = 0; c < pool.size(); ++c) {
            if (used[c]) continue;
            double g = 0.0;
            for (std::size_t s : chosen) g += dist[c][s];
            if (g > gain) {
                gain = g;
                pick = c;
            }
        }
        used[pick] = true;
        chosen.push_back(pick);
    }
    chosen.resize(plan.trajectories);
    std::sort(chosen.begin(), chosen.end()); // stable output order
    std::vector<MorrisTrajectory> selected;
    for (std::size_t c : chosen) selected.push_back(std::move(pool[c]));
    return selected;
}

struct MorrisVariableResult {
    std::string variable;
    bool screened = false;
    std::vector<std::vector<double>> effects; // [objective][trajectory]
    std::vector<double> mu_star;              // per objective, mean |EE|
    std::vector<double> sigma;                // per objective, sample stddev of EE
};

struct MorrisResult {
    std::vector<MorrisVariableResult> variables; // space order
    std::vector<std::string> objective_names;
    LedgerCounts counts;
};

/// Walks every trajectory through the ledger and aggregates the elementary
/// effects EE = (y(x + Delta e_i) - y(x)) / Delta (sign following the
/// perturbation direction). Unscreened single-option variables are reported
/// with zero effects.
inline MorrisResult elementary_effects(const DesignSpace& space,
                                       const std::vector<MorrisTrajectory>& trajectories,
                                       const ObjectiveBackend& backend, EvaluationLedger& ledger,
                                       unsigned jobs = 1) {
    if (trajectories.empty())
        throw std::invalid_argument("morris: no trajectories");
    const std::size_t r = trajectories.size();
    const std::size_t m = backend.objective_count();

    std::vector<DesignVector> all_points;
    for (const MorrisTrajectory& t : trajectories)
        for (const DesignVector& p : t.points) all_points.push_back(p);
    std::vector<ObjectiveVector> values;
    batch_evaluate(ledger, backend, all_points, &values, jobs);

    MorrisResult result;
    result.objective_names = backend.objective_names();
    result.counts = ledger.counts();
    std::vector<MorrisVariableResult> vars(space.variable_count());
    for (std::size_t i = 0; i < space.variable_count(); ++i) {
        vars[i].variable = space.variable(i).name;
        vars[i].screened = space.option_count(i) >= 2;
        vars[i].effects.assign(m, {});
    }
    std::size_t offset = 0;
    for (const MorrisTrajectory& traj : trajectories) {
        for (std::size_t t = 0; t < traj.step_variable.size(); ++t) {
            std::size_t var = traj.step_variable[t];
            double delta = traj.step_delta[t];
            const ObjectiveVector& before = values[offset + t];
            const ObjectiveVector& after = values[offset + t + 1];
            for (std::size_t k = 0; k < m; ++k)
                vars[var].effects[k].push_back((after[k] - before[k]) / delta);
        }
        offset += traj.points.size();
    }
    for (MorrisVariableResult& v : vars) {
        v.mu_star.assign(m, 0.0);
        v.sigma.assign(m, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
            const std::vector<double>& ee = v.effects[k];
            if (ee.empty()) {
                v.effects[k].assign(r, 0.0); // unscreened: zero-effect by definition
                continue;
            }
            if (ee.size() != r)
                throw std::logic_error("morris: variable '" + v.variable + "' has " +
                                       std::to_string(ee.size()) + " effects, expected " +
                                       std::to_string(r));
            double mu = 0.0, mu_star = 0.0;
            for (double e : ee) {
                mu += e;
                mu_star += std::abs(e);
            }
            mu /= static_cast<double>(r);
            v.mu_star[k] = mu_star / static_cast<double>(r);
            if (r > 1) {
                double ss = 0.0;
                for (double e : ee) ss += (e - mu) * (e - mu);
                v.sigma[k] = std::sqrt(ss / static_cast<double>(r - 1));
            }
        }
    }
    result.variables = std::move(vars);
    return result;
}

} // namespace seqopt
