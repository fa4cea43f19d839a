#pragma once

// Comparison solvers built from the same operator suite as the optimizer:
// a generational GA with tournament selection (a stand-in for adaptive GA
// variants, not a reimplementation of any of them), plain random search, and
// the optimizer with its neighborhood search switched off.

#include <cstdint>

#include "fsmsp/model.hpp"
#include "fsmsp/sbmo.hpp"

namespace fsmsp {

enum class BaselineAlgorithm { GA, Random, SbmoWithoutNeighborhood };

struct BaselineConfig {
    BaselineAlgorithm algorithm = BaselineAlgorithm::GA;
    int population_size = 1000;
    int max_generations = 500;
    std::uint64_t seed = 0;
    int ga_tournament_size = 2;
    double ga_crossover_rate = 0.9;
    double ga_mutation_rate = 0.1;
    int ga_elite_count = 2;

    void validate() const;
};

/// Elitist generational GA. Crossover and M1-M3 mutation are shared with the
/// optimizer; an illegal child is replaced by a copy of its first parent.
RunResult ga_solve(const Instance& instance, const BaselineConfig& config, Rng& rng);

/// Best of `evaluations` random legal assignments; the trace holds the running
/// minimum after each sample.
RunResult random_search(const Instance& instance, int evaluations, Rng& rng);

/// Dispatches on `config.algorithm`. Random search spends Q*G evaluations, the
/// same budget of candidates as the population methods.
RunResult run_baseline(const Instance& instance, const BaselineConfig& config);

}  // namespace fsmsp
