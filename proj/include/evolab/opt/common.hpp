#pragma once

// Shared optimizer surface.
//
// All optimizers maximize. They hand whole generations to a batch objective
// and update their state single-threaded between batches; the objective owns
// evaluation order, parallelism, repeat aggregation, and logging. Evaluation
// results must depend only on (candidate, generation, index), never on
// scheduling, so pre-split RNG streams keep runs reproducible at any worker
// count.

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace evolab::opt {

using Population = std::vector<Eigen::VectorXd>;

// fitness[i] for candidates[i]; `generation` is 0 for the initial population.
using BatchObjective =
    std::function<std::vector<double>(const Population& candidates, int generation)>;

struct EvolutionResult {
    Eigen::VectorXd best;
    double best_fitness = -std::numeric_limits<double>::infinity();
    // fitness per generation in candidate order; [0] is the initial population
    std::vector<std::vector<double>> generation_fitness;
    // fitness of the population that survives each generation's selection;
    // equals generation_fitness for schemes that replace the whole population
    std::vector<std::vector<double>> population_fitness;
    Population final_population;
    std::vector<double> final_fitness;
};

namespace detail {

inline void check_batch(const Population& pop, const std::vector<double>& fit) {
    if (fit.size() != pop.size())
        throw std::runtime_error("objective returned wrong fitness count");
}

inline void track_best(EvolutionResult& res, const Population& pop,
                       const std::vector<double>& fit) {
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (fit[i] > res.best_fitness) {
            res.best = pop[i];
            res.best_fitness = fit[i];
        }
    }
}

}  // namespace detail

// Adapts a per-candidate function; handy in tests and simple drivers.
inline BatchObjective pointwise(std::function<double(const Eigen::VectorXd&)> f) {
    return [f = std::move(f)](const Population& pop, int) {
        std::vector<double> out;
        out.reserve(pop.size());
        for (const auto& x : pop) out.push_back(f(x));
        return out;
    };
}

}  // namespace evolab::opt
