#pragma once

// Differential evolution with (mu + lambda) elitist selection.
//
// Per parent slot one trial vector is built from a random distinct triplet:
// y = x_i + F (x_j - x_k), then uniform crossover against the base x_i
// (mask gene taken from y with probability CR) and box clamping. Parents and
// trials are merged and the best |pop| survive, so the best-so-far fitness
// never decreases.

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "evolab/core/rng.hpp"
#include "evolab/opt/common.hpp"

namespace evolab::opt {

struct DeConfig {
    int population = 25;
    double scale_f = 0.5;
    double crossover_rate = 0.9;
    double lower = -10.0;
    double upper = 10.0;
    int generations = 100;

    void validate() const {
        if (population < 4)
            throw std::invalid_argument("de: population must be >= 4 for distinct triplets");
        if (!(scale_f > 0.0)) throw std::invalid_argument("de: F must be > 0");
        if (crossover_rate < 0.0 || crossover_rate > 1.0)
            throw std::invalid_argument("de: CR must lie in [0, 1]");
        if (!(lower < upper)) throw std::invalid_argument("de: empty search box");
        if (generations < 0) throw std::invalid_argument("de: negative generations");
    }
};

// Trial vectors for one generation, in parent-slot order. Exposed separately
// so the recombination arithmetic is testable without an objective.
inline Population de_trials(const Population& pop, const DeConfig& cfg,
                            core::RandomStream& rng) {
    cfg.validate();
    if (static_cast<int>(pop.size()) != cfg.population)
        throw std::invalid_argument("de_trials: population size mismatch");
    const std::size_t n = pop.size();
    Population trials;
    trials.reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
        const auto i = static_cast<std::size_t>(rng.uniform_int(n));
        std::size_t j = i;
        while (j == i) j = static_cast<std::size_t>(rng.uniform_int(n));
        std::size_t k = i;
        while (k == i || k == j) k = static_cast<std::size_t>(rng.uniform_int(n));
        const Eigen::VectorXd y = pop[i] + cfg.scale_f * (pop[j] - pop[k]);
        Eigen::VectorXd v = pop[i];
        for (Eigen::Index g = 0; g < v.size(); ++g)
            if (rng.uniform() < cfg.crossover_rate) v[g] = y[g];
        trials.push_back(v.cwiseMax(cfg.lower).cwiseMin(cfg.upper));
    }
    return trials;
}

struct DeStepResult {
    Population population;
    std::vector<double> fitness;
    std::vector<double> trial_fitness;  // objective values of this step's trials
};

// One generation: build trials, evaluate them, keep the best |pop| of
// parents + trials. Ties preserve order (parents first, then trial slots).
inline DeStepResult de_step(const Population& pop, const std::vector<double>& fitness,
                            const DeConfig& cfg, core::RandomStream& rng,
                            const BatchObjective& objective, int generation) {
    if (fitness.size() != pop.size())
        throw std::invalid_argument("de_step: population/fitness size mismatch");
    Population trials = de_trials(pop, cfg, rng);
    std::vector<double> trial_fit = objective(trials, generation);
    detail::check_batch(trials, trial_fit);

    std::vector<std::size_t> order(2 * pop.size());
    std::iota(order.begin(), order.end(), 0);
    auto fit_of = [&](std::size_t idx) {
        return idx < pop.size() ? fitness[idx] : trial_fit[idx - pop.size()];
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return fit_of(a) > fit_of(b);
    });

    DeStepResult out;
    out.trial_fitness = trial_fit;
    out.population.reserve(pop.size());
    out.fitness.reserve(pop.size());
    for (std::size_t r = 0; r < pop.size(); ++r) {
        const std::size_t idx = order[r];
        out.population.push_back(idx < pop.size() ? pop[idx] : trials[idx - pop.size()]);
        out.fitness.push_back(fit_of(idx));
    }
    return out;
}

// Full run; generation_fitness[g] holds the fitness of the candidates
// evaluated in generation g (initial population for g = 0, trials after).
inline EvolutionResult de_optimize(const BatchObjective& objective, int dim,
                                   const DeConfig& cfg, core::RandomStream& rng) {
    cfg.validate();
    if (dim <= 0) throw std::invalid_argument("de_optimize: dim must be > 0");

    EvolutionResult res;
    Population pop;
    pop.reserve(static_cast<std::size_t>(cfg.population));
    for (int i = 0; i < cfg.population; ++i)
        pop.push_back(rng.uniform_vector(dim, cfg.lower, cfg.upper));
    std::vector<double> fit = objective(pop, 0);
    detail::check_batch(pop, fit);
    detail::track_best(res, pop, fit);
    res.generation_fitness.push_back(fit);
    res.population_fitness.push_back(fit);

    for (int g = 1; g <= cfg.generations; ++g) {
        DeStepResult step = de_step(pop, fit, cfg, rng, objective, g);
        detail::track_best(res, step.population, step.fitness);
        res.generation_fitness.push_back(step.trial_fitness);
        res.population_fitness.push_back(step.fitness);
        pop = std::move(step.population);
        fit = std::move(step.fitness);
    }
    res.final_population = std::move(pop);
    res.final_fitness = std::move(fit);
    return res;
}

}  // namespace evolab::opt
