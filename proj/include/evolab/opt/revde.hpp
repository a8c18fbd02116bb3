#pragma once

// Reversible differential evolution.
//
// Each generation keeps the top mu of lambda = 3 mu candidates, forms two
// shuffled copies mu2 = shuffle(mu1), mu3 = shuffle(mu2), and produces three
// child blocks through the reversible linear map
//
//   l1 = mu1 + F (mu2 - mu3)
//   l2 = mu2 + F (mu3 - l1)
//   l3 = mu3 + F (l1 - l2)
//
// followed by uniform crossover of each child with its block parent (child
// gene kept with probability CR) and clamping to the search box. The map is
// invertible: the matching 3x3 matrix (per coordinate) has unit determinant,
// so no candidate information is destroyed by mutation.

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "evolab/core/rng.hpp"
#include "evolab/opt/common.hpp"

namespace evolab::opt {

struct RevDeConfig {
    int lambda = 30;  // population size, 3 * mu
    int mu = 10;      // parents kept per generation
    double scale_f = 0.5;
    double crossover_rate = 0.9;
    double lower = -1.0;
    double upper = 1.0;
    int generations = 100;

    void validate() const {
        if (mu <= 0 || lambda != 3 * mu)
            throw std::invalid_argument("revde: lambda must equal 3 mu, mu > 0");
        if (!(scale_f > 0.0)) throw std::invalid_argument("revde: F must be > 0");
        if (crossover_rate < 0.0 || crossover_rate > 1.0)
            throw std::invalid_argument("revde: CR must lie in [0, 1]");
        if (!(lower < upper)) throw std::invalid_argument("revde: empty search box");
        if (generations < 0) throw std::invalid_argument("revde: negative generations");
    }
};

// The three child blocks before crossover and clamping. Row i of each block
// derives from row i of (mu1, mu2, mu3).
struct RevDeChildren {
    Population l1, l2, l3;
};

inline RevDeChildren revde_candidates(const Population& mu1, const Population& mu2,
                                      const Population& mu3, double f) {
    if (mu1.size() != mu2.size() || mu1.size() != mu3.size() || mu1.empty())
        throw std::invalid_argument("revde_candidates: parent blocks must match");
    RevDeChildren out;
    out.l1.reserve(mu1.size());
    out.l2.reserve(mu1.size());
    out.l3.reserve(mu1.size());
    for (std::size_t i = 0; i < mu1.size(); ++i) {
        Eigen::VectorXd l1 = mu1[i] + f * (mu2[i] - mu3[i]);
        Eigen::VectorXd l2 = mu2[i] + f * (mu3[i] - l1);
        Eigen::VectorXd l3 = mu3[i] + f * (l1 - l2);
        out.l1.push_back(std::move(l1));
        out.l2.push_back(std::move(l2));
        out.l3.push_back(std::move(l3));
    }
    return out;
}

// Per-coordinate linear map (l1, l2, l3)^T = M (mu1, mu2, mu3)^T.
inline Eigen::Matrix3d revde_linear_map(double f) {
    Eigen::Matrix3d m;
    m << 1.0, f, -f,
        -f, 1.0 - f * f, f + f * f,
        f + f * f, f * f - f * (1.0 - f * f), 1.0 - f * f - f * (f + f * f);
    return m;
}

// One generation: select, shuffle, recombine, crossover, clamp. Returns the
// full replacement population of lambda candidates (children only).
inline Population revde_generation(const Population& pop,
                                   const std::vector<double>& fitness,
                                   const RevDeConfig& cfg, core::RandomStream& rng) {
    cfg.validate();
    if (static_cast<int>(pop.size()) != cfg.lambda || fitness.size() != pop.size())
        throw std::invalid_argument("revde_generation: population/fitness size mismatch");

    // top-mu by fitness, ties broken by candidate index
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return fitness[a] > fitness[b];
    });

    Population mu1;
    mu1.reserve(static_cast<std::size_t>(cfg.mu));
    for (int i = 0; i < cfg.mu; ++i) mu1.push_back(pop[order[static_cast<std::size_t>(i)]]);
    Population mu2 = mu1;
    rng.shuffle(mu2);
    Population mu3 = mu2;
    rng.shuffle(mu3);

    RevDeChildren children = revde_candidates(mu1, mu2, mu3, cfg.scale_f);

    Population next;
    next.reserve(static_cast<std::size_t>(cfg.lambda));
    const std::array<std::pair<const Population*, const Population*>, 3> blocks = {
        {{&children.l1, &mu1}, {&children.l2, &mu2}, {&children.l3, &mu3}}};
    for (const auto& [child_block, parent_block] : blocks) {
        for (std::size_t i = 0; i < child_block->size(); ++i) {
            Eigen::VectorXd v = (*parent_block)[i];
            const Eigen::VectorXd& child = (*child_block)[i];
            for (Eigen::Index g = 0; g < v.size(); ++g)
                if (rng.uniform() < cfg.crossover_rate) v[g] = child[g];
            next.push_back(v.cwiseMax(cfg.lower).cwiseMin(cfg.upper));
        }
    }
    return next;
}

// Full run: initial population uniform in the box, then cfg.generations
// replacement generations. generation_fitness[0] is the initial population.
inline EvolutionResult revde_optimize(const BatchObjective& objective, int dim,
                                      const RevDeConfig& cfg, core::RandomStream& rng) {
    cfg.validate();
    if (dim <= 0) throw std::invalid_argument("revde_optimize: dim must be > 0");

    EvolutionResult res;
    Population pop;
    pop.reserve(static_cast<std::size_t>(cfg.lambda));
    for (int i = 0; i < cfg.lambda; ++i)
        pop.push_back(rng.uniform_vector(dim, cfg.lower, cfg.upper));
    std::vector<double> fit = objective(pop, 0);
    detail::check_batch(pop, fit);
    detail::track_best(res, pop, fit);
    res.generation_fitness.push_back(fit);
    res.population_fitness.push_back(fit);

    for (int g = 1; g <= cfg.generations; ++g) {
        pop = revde_generation(pop, fit, cfg, rng);
        fit = objective(pop, g);
        detail::check_batch(pop, fit);
        detail::track_best(res, pop, fit);
        res.generation_fitness.push_back(fit);
        res.population_fitness.push_back(fit);
    }
    res.final_population = std::move(pop);
    res.final_fitness = std::move(fit);
    return res;
}

}  // namespace evolab::opt
