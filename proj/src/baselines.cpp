#include "fsmsp/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <fmt/format.h>

namespace fsmsp {

void BaselineConfig::validate() const {
    if (population_size < 2) {
        throw InvalidConfig(fmt::format("population_size must be >= 2, got {}", population_size));
    }
    if (max_generations < 1) {
        throw InvalidConfig(fmt::format("max_generations must be >= 1, got {}", max_generations));
    }
    if (ga_tournament_size < 2) {
        throw InvalidConfig(fmt::format("ga_tournament_size must be >= 2, got {}", ga_tournament_size));
    }
    if (!(ga_crossover_rate >= 0.0 && ga_crossover_rate <= 1.0)) {
        throw InvalidConfig(fmt::format("ga_crossover_rate {} outside [0, 1]", ga_crossover_rate));
    }
    if (!(ga_mutation_rate >= 0.0 && ga_mutation_rate <= 1.0)) {
        throw InvalidConfig(fmt::format("ga_mutation_rate {} outside [0, 1]", ga_mutation_rate));
    }
    if (ga_elite_count < 0 || ga_elite_count >= population_size) {
        throw InvalidConfig(fmt::format("ga_elite_count must lie in [0, {}), got {}", population_size, ga_elite_count));
    }
}

namespace {

using Clock = std::chrono::steady_clock;

const EvaluatedSolution& tournament(const std::vector<EvaluatedSolution>& pop, int size, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const EvaluatedSolution* winner = &pop[pick(rng)];
    for (int k = 1; k < size; ++k) {
        const EvaluatedSolution& challenger = pop[pick(rng)];
        if (challenger.completion_time < winner->completion_time) winner = &challenger;
    }
    return *winner;
}

}  // namespace

RunResult ga_solve(const Instance& instance, const BaselineConfig& config, Rng& rng) {
    config.validate();
    const auto start = Clock::now();
    const auto q = static_cast<std::size_t>(config.population_size);

    std::vector<EvaluatedSolution> pop;
    pop.reserve(q);
    for (std::size_t i = 0; i < q; ++i) {
        pop.push_back(evaluate(instance, random_legal_assignment(instance.num_stages(), instance.num_workers(), rng)));
    }
    std::ranges::stable_sort(pop, {}, &EvaluatedSolution::completion_time);

    RunResult result;
    result.best = pop.front();
    std::bernoulli_distribution do_crossover(config.ga_crossover_rate);
    std::bernoulli_distribution do_mutation(config.ga_mutation_rate);
    std::uniform_int_distribution<std::size_t> pick_op(0, kExplorationPool.size() - 1);

    for (int g = 1; g <= config.max_generations; ++g) {
        std::vector<EvaluatedSolution> next(pop.begin(), pop.begin() + config.ga_elite_count);
        next.reserve(q);
        while (next.size() < q) {
            const EvaluatedSolution& first = tournament(pop, config.ga_tournament_size, rng);
            const EvaluatedSolution& second = tournament(pop, config.ga_tournament_size, rng);
            Assignment child = first.assignment;
            if (do_crossover(rng)) {
                child = crossover(first.assignment, second.assignment, rng);
                ++result.operator_usage[static_cast<std::size_t>(OperatorId::Crossover)];
            }
            if (do_mutation(rng)) {
                const OperatorId op = kExplorationPool[pick_op(rng)];
                child = apply_mutation(op, instance, child, rng);
                ++result.operator_usage[static_cast<std::size_t>(op)];
            }
            if (is_legal(instance, child)) {
                next.push_back(evaluate(instance, std::move(child)));
            } else {
                next.push_back(first);
            }
        }
        pop = std::move(next);
        std::ranges::stable_sort(pop, {}, &EvaluatedSolution::completion_time);
        if (pop.front().completion_time < result.best.completion_time) result.best = pop.front();
        result.trace.push_back(result.best.completion_time);
        result.generations_run = g;
    }
    result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

RunResult random_search(const Instance& instance, int evaluations, Rng& rng) {
    if (evaluations < 1) {
        throw InvalidConfig(fmt::format("random search needs at least one evaluation, got {}", evaluations));
    }
    const auto start = Clock::now();
    RunResult result;
    result.trace.reserve(static_cast<std::size_t>(evaluations));
    for (int e = 0; e < evaluations; ++e) {
        auto sample = evaluate(instance, random_legal_assignment(instance.num_stages(), instance.num_workers(), rng));
        if (e == 0 || sample.completion_time < result.best.completion_time) result.best = std::move(sample);
        result.trace.push_back(result.best.completion_time);
    }
    result.generations_run = evaluations;
    result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

RunResult run_baseline(const Instance& instance, const BaselineConfig& config) {
    config.validate();
    Rng rng(config.seed);
    switch (config.algorithm) {
        case BaselineAlgorithm::GA:
            return ga_solve(instance, config, rng);
        case BaselineAlgorithm::Random:
            return random_search(instance, config.population_size * config.max_generations, rng);
        case BaselineAlgorithm::SbmoWithoutNeighborhood: {
            SolverConfig sc;
            sc.population_size = config.population_size;
            sc.max_generations = config.max_generations;
            sc.seed = config.seed;
            sc.neighborhood_search_enabled = false;
            return solve(instance, sc, rng);
        }
    }
    throw InvalidConfig("unknown baseline algorithm");
}

}  // namespace fsmsp
