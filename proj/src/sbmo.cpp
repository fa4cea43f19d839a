#include "fsmsp/sbmo.hpp"

#include <algorithm>
#include <chrono>
#include <fmt/format.h>

namespace fsmsp {

void SolverConfig::validate() const {
    if (population_size < 2) {
        throw InvalidConfig(fmt::format("population_size must be >= 2, got {}", population_size));
    }
    if (max_generations < 1) {
        throw InvalidConfig(fmt::format("max_generations must be >= 1, got {}", max_generations));
    }
    if (pl.kind == PlPolicy::Kind::Fixed) {
        if (pl.value < 0 || pl.value > population_size) {
            throw InvalidConfig(fmt::format("pl must lie in [0, {}], got {}", population_size, pl.value));
        }
    } else if (pl.low < 0 || pl.high <= pl.low) {
        throw InvalidConfig(fmt::format("random pl range [{}, {}) is empty or negative", pl.low, pl.high));
    }
}

int draw_pl(const SolverConfig& config, Rng& rng) {
    if (config.pl.kind == PlPolicy::Kind::Fixed) return config.pl.value;
    const int drawn = std::uniform_int_distribution<int>(config.pl.low, config.pl.high - 1)(rng);
    return std::min(drawn, config.population_size);
}

Assignment random_legal_assignment(int num_stages, int num_workers, Rng& rng) {
    Assignment a;
    a.stage_of.reserve(static_cast<std::size_t>(num_workers));
    for (int j = 1; j <= num_stages; ++j) a.stage_of.push_back(j);
    std::uniform_int_distribution<int> label(1, num_stages);
    for (int i = num_stages; i < num_workers; ++i) a.stage_of.push_back(label(rng));
    std::shuffle(a.stage_of.begin(), a.stage_of.end(), rng);
    return a;
}

namespace {

void sort_population(std::vector<EvaluatedSolution>& members) {
    std::ranges::stable_sort(members, {}, &EvaluatedSolution::completion_time);
}

std::size_t draw_index(Rng& rng, std::size_t upper_exclusive) {
    return std::uniform_int_distribution<std::size_t>(0, upper_exclusive - 1)(rng);
}

}  // namespace

Population initialize_population(const Instance& instance, const SolverConfig& config, Rng& rng) {
    Population pop;
    pop.members.reserve(static_cast<std::size_t>(config.population_size));
    for (int q = 0; q < config.population_size; ++q) {
        pop.members.push_back(
            evaluate(instance, random_legal_assignment(instance.num_stages(), instance.num_workers(), rng)));
    }
    sort_population(pop.members);
    return pop;
}

std::size_t rank_distance(const Population& pop, std::size_t idx_f, std::size_t idx_m) {
    if (idx_f >= pop.size() || idx_m >= pop.size()) {
        throw Error(fmt::format("rank indices ({}, {}) out of range for population of {}", idx_f, idx_m, pop.size()));
    }
    return idx_f > idx_m ? idx_f - idx_m : idx_m - idx_f;
}

std::size_t hamming_distance(const Assignment& a, const Assignment& b) {
    if (a.size() != b.size()) {
        throw MalformedAssignment(fmt::format("hamming distance of lengths {} and {}", a.size(), b.size()));
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

OffspringBatch generate_offspring(const Instance& instance, const Population& pop,
                                  const OffspringParams& params, Rng& rng) {
    if (pop.size() < 2) {
        throw Error("offspring generation needs at least two barnacles");
    }
    if (params.mutation_pool.empty()) {
        throw Error("empty mutation pool");
    }
    OffspringBatch batch;
    batch.legal.reserve(pop.size());
    for (std::size_t q = 0; q < pop.size(); ++q) {
        const std::size_t father = draw_index(rng, pop.size());
        std::size_t mother = draw_index(rng, pop.size() - 1);
        if (mother >= father) ++mother;

        const std::size_t dist = params.distance == DistancePolicy::Rank
                                     ? rank_distance(pop, father, mother)
                                     : hamming_distance(pop.members[father].assignment,
                                                        pop.members[mother].assignment);
        Assignment child;
        if (dist <= static_cast<std::size_t>(params.pl)) {
            child = crossover(pop.members[father].assignment, pop.members[mother].assignment, rng);
            ++batch.operator_usage[static_cast<std::size_t>(OperatorId::Crossover)];
        } else {
            const OperatorId op = params.mutation_pool[draw_index(rng, params.mutation_pool.size())];
            child = apply_mutation(op, instance, pop.members[mother].assignment, rng);
            ++batch.operator_usage[static_cast<std::size_t>(op)];
        }
        ++batch.generated;
        if (is_legal(instance, child)) {
            batch.legal.push_back(std::move(child));
        }
    }
    return batch;
}

Population update_population(const Population& pop, std::vector<EvaluatedSolution> offspring) {
    Population next;
    next.members.reserve(pop.size() + offspring.size());
    next.members.insert(next.members.end(), pop.members.begin(), pop.members.end());
    std::move(offspring.begin(), offspring.end(), std::back_inserter(next.members));
    sort_population(next.members);
    next.members.resize(pop.size());
    return next;
}

bool detect_collapse(const Population& pop) {
    if (pop.members.empty()) return true;
    const auto& head = pop.members.front().assignment;
    return std::ranges::all_of(pop.members, [&](const EvaluatedSolution& m) { return m.assignment == head; });
}

RunResult solve(const Instance& instance, const SolverConfig& config, const GenerationObserver& observer) {
    Rng rng(config.seed);
    return solve(instance, config, rng, observer);
}

RunResult solve(const Instance& instance, const SolverConfig& config, Rng& rng, const GenerationObserver& observer) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    RunResult result;
    result.pl = draw_pl(config, rng);
    result.trace.reserve(static_cast<std::size_t>(config.max_generations));

    Population pop = initialize_population(instance, config, rng);
    int pl = result.pl;
    bool neighborhood = false;

    for (int g = 1; g <= config.max_generations; ++g) {
        const OffspringParams params{
            pl,
            neighborhood ? std::span<const OperatorId>(kNeighborhoodPool) : std::span<const OperatorId>(kExplorationPool),
            config.distance};
        OffspringBatch batch = generate_offspring(instance, pop, params, rng);

        std::vector<EvaluatedSolution> evaluated;
        evaluated.reserve(batch.legal.size());
        for (auto& child : batch.legal) {
            evaluated.push_back(evaluate(instance, std::move(child)));
        }
        pop = update_population(pop, std::move(evaluated));
        result.trace.push_back(pop.best().completion_time);
        for (std::size_t k = 0; k < kOperatorCount; ++k) result.operator_usage[k] += batch.operator_usage[k];

        bool collapsed = false;
        if (config.neighborhood_search_enabled) {
            collapsed = detect_collapse(pop);
            if (collapsed && !neighborhood) {
                neighborhood = true;
                pl = 0;
                if (!result.collapse_generation) result.collapse_generation = g;
            } else if (!collapsed && neighborhood && config.collapse_reset) {
                neighborhood = false;
                pl = result.pl;
            }
        }

        if (observer) {
            GenerationStats stats;
            stats.generation = g;
            stats.pl = params.pl;
            stats.neighborhood_pool = params.mutation_pool.data() == kNeighborhoodPool.data();
            stats.operator_usage = batch.operator_usage;
            stats.offspring_generated = batch.generated;
            stats.offspring_legal = batch.legal.size();
            stats.collapsed = collapsed;
            stats.best_completion_time = pop.best().completion_time;
            observer(stats);
        }
        result.generations_run = g;
    }

    result.best = pop.best();
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace fsmsp
