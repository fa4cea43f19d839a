#pragma once

/**
 * @file sbmo.hpp
 * @brief Self-encoding barnacle mating optimizer.
 *
 * Each generation produces Q candidates. A candidate comes from two distinct
 * parents drawn uniformly from the sorted population: when their distance is
 * within the reach `pl` they mate by uniform crossover, otherwise the mother
 * mutates on her own with an operator drawn from the active mutation pool.
 * Illegal candidates are dropped, the remainder is merged with the parents and
 * the best Q survive.
 *
 * Once the whole population is a single repeated vector, crossover can no
 * longer produce anything new. The engine then sets the reach to 0 and
 * switches the mutation pool to the neighborhood operators (balance,
 * reciprocal exchange, triplet) for the rest of the run. Disabling the
 * neighborhood search gives the ablation variant, which never switches.
 *
 * All random draws happen serially on one engine seeded from the config, so a
 * run is fully reproducible from (instance, config).
 */

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fsmsp/model.hpp"
#include "fsmsp/operators.hpp"

namespace fsmsp {

class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// How far apart two parents are; compared against the mating reach.
enum class DistancePolicy {
    Rank,     ///< |rank_f - rank_m| in the sorted population
    Hamming,  ///< number of positions where the two vectors differ
};

struct PlPolicy {
    enum class Kind { Fixed, RandomIn };
    Kind kind = Kind::RandomIn;
    int value = 0;    ///< used by Fixed
    int low = 200;    ///< RandomIn draws uniformly from [low, high)
    int high = 1000;

    static PlPolicy fixed(int pl) { return {Kind::Fixed, pl, 0, 0}; }
    static PlPolicy random_in(int low, int high) { return {Kind::RandomIn, 0, low, high}; }
};

struct SolverConfig {
    int population_size = 1000;  ///< Q
    int max_generations = 500;   ///< G
    PlPolicy pl = PlPolicy::random_in(200, 1000);
    std::uint64_t seed = 0;
    bool neighborhood_search_enabled = true;
    /// Leave the neighborhood search again when the population diversifies.
    bool collapse_reset = false;
    DistancePolicy distance = DistancePolicy::Rank;

    void validate() const;
};

/// Members sorted ascending by completion time.
struct Population {
    std::vector<EvaluatedSolution> members;

    std::size_t size() const noexcept { return members.size(); }
    const EvaluatedSolution& best() const { return members.front(); }
};

using OperatorCounts = std::array<std::uint64_t, kOperatorCount>;

struct RunResult {
    EvaluatedSolution best;
    std::vector<double> trace;  ///< best completion time after each generation
    std::optional<int> collapse_generation;
    double wall_seconds = 0.0;
    int generations_run = 0;
    int pl = 0;  ///< initial mating reach used by the run
    OperatorCounts operator_usage{};
};

/// Per-generation snapshot handed to an optional observer.
struct GenerationStats {
    int generation = 0;  ///< 1-based
    int pl = 0;          ///< reach in effect while generating
    bool neighborhood_pool = false;
    OperatorCounts operator_usage{};  ///< draws during this generation
    std::size_t offspring_generated = 0;
    std::size_t offspring_legal = 0;
    bool collapsed = false;  ///< population state after the update
    double best_completion_time = 0.0;
};

using GenerationObserver = std::function<void(const GenerationStats&)>;

/// Draws the run's reach; RandomIn draws once and clamps to Q.
int draw_pl(const SolverConfig& config, Rng& rng);

/// Random legal assignment: one worker per stage plus R-N uniform labels,
/// with the worker order shuffled.
Assignment random_legal_assignment(int num_stages, int num_workers, Rng& rng);

Population initialize_population(const Instance& instance, const SolverConfig& config, Rng& rng);

std::size_t rank_distance(const Population& pop, std::size_t idx_f, std::size_t idx_m);
std::size_t hamming_distance(const Assignment& a, const Assignment& b);

struct OffspringParams {
    int pl = 0;
    std::span<const OperatorId> mutation_pool = kExplorationPool;
    DistancePolicy distance = DistancePolicy::Rank;
};

struct OffspringBatch {
    std::vector<Assignment> legal;  ///< survivors of the legality filter, in draw order
    std::size_t generated = 0;
    OperatorCounts operator_usage{};
};

OffspringBatch generate_offspring(const Instance& instance, const Population& pop,
                                  const OffspringParams& params, Rng& rng);

/// Stable merge: sorts parents ++ offspring by completion time (parents win
/// ties) and keeps the first |pop| entries.
Population update_population(const Population& pop, std::vector<EvaluatedSolution> offspring);

/// True when every member carries the same vector as the best one.
bool detect_collapse(const Population& pop);

RunResult solve(const Instance& instance, const SolverConfig& config,
                const GenerationObserver& observer = {});
RunResult solve(const Instance& instance, const SolverConfig& config, Rng& rng,
                const GenerationObserver& observer = {});

}  // namespace fsmsp
