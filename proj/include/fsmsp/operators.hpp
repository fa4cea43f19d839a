#pragma once

/**
 * @file operators.hpp
 * @brief Variation operators on the row-vector encoding.
 *
 * Each randomized operator draws its positions from the supplied engine in a
 * fixed order and then delegates to a deterministic counterpart taking
 * explicit 0-based positions. The deterministic forms exist so that the exact
 * effect of a draw can be replayed and tested.
 *
 * Every operator except crossover and balance permutes the entries of the
 * vector, so per-stage occupancy (and therefore legality) is preserved.
 */

#include <array>
#include <optional>
#include <random>
#include <span>
#include <string_view>

#include "fsmsp/model.hpp"

namespace fsmsp {

using Rng = std::mt19937_64;

enum class OperatorId : int {
    Crossover = 0,
    M1Inversion,
    M2Insertion,
    M3DoubleSegmentSwap,
    M4Balance,
    M5ReciprocalExchange,
    M6Triplet,
};

inline constexpr std::size_t kOperatorCount = 7;

std::string_view to_string(OperatorId id);

/// Mutation pool used before the population collapses.
inline constexpr std::array<OperatorId, 3> kExplorationPool{
    OperatorId::M1Inversion, OperatorId::M2Insertion, OperatorId::M3DoubleSegmentSwap};
/// Mutation pool of the neighborhood search.
inline constexpr std::array<OperatorId, 3> kNeighborhoodPool{
    OperatorId::M4Balance, OperatorId::M5ReciprocalExchange, OperatorId::M6Triplet};

// Deterministic forms. Positions are 0-based.

/// child[i] = father[i] where take_father[i], else mother[i].
Assignment crossover_with_mask(const Assignment& father, const Assignment& mother,
                               std::span<const bool> take_father);
/// Reverses a[u..v] inclusive.
Assignment invert_segment(Assignment a, std::size_t u, std::size_t v);
/// Removes a[from] and reinserts it so that it ends up at index `to`.
Assignment move_entry(Assignment a, std::size_t from, std::size_t to);
/// a[s..R) ++ a[0..s).
Assignment swap_segments(Assignment a, std::size_t split);
Assignment swap_entries(Assignment a, std::size_t i, std::size_t j);
/// (a_i, a_j, a_k) -> (a_j, a_k, a_i).
Assignment rotate_triplet(Assignment a, std::size_t i, std::size_t j, std::size_t k);
/// Reassigns worker `worker` to 1-based stage `stage`.
Assignment reassign_worker(Assignment a, std::size_t worker, int stage);

// Randomized forms.

/// Uniform crossover; each position copies the father or the mother with
/// probability 1/2. The child may be illegal.
Assignment crossover(const Assignment& father, const Assignment& mother, Rng& rng);
Assignment mutate_inversion(const Assignment& a, Rng& rng);
Assignment mutate_insertion(const Assignment& a, Rng& rng);
Assignment mutate_double_segment_swap(const Assignment& a, Rng& rng);
Assignment mutate_reciprocal_exchange(const Assignment& a, Rng& rng);
/// Falls back to the reciprocal exchange when fewer than three workers exist.
Assignment mutate_triplet(const Assignment& a, Rng& rng);

/// Stages picked by the balance mutation, 0-based. `donor` is empty when no
/// stage can give up a worker (or every stage runs at the same speed).
struct BalanceMove {
    int weakest = 0;
    std::optional<int> donor;
};
BalanceMove plan_balance(const Instance& instance, const Assignment& a);

/// Moves one uniformly chosen worker from the fastest stage that has at least
/// two workers to the slowest stage. Ties resolve to the lowest stage index.
Assignment mutate_balance(const Instance& instance, const Assignment& a, Rng& rng);

/// Applies a single mutation operator. Crossover is not a mutation.
Assignment apply_mutation(OperatorId id, const Instance& instance, const Assignment& a, Rng& rng);

}  // namespace fsmsp
