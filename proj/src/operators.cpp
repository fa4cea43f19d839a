#include "fsmsp/operators.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace fsmsp {

namespace {

std::size_t draw_index(Rng& rng, std::size_t upper_exclusive) {
    return std::uniform_int_distribution<std::size_t>(0, upper_exclusive - 1)(rng);
}

void require_in_range(const Assignment& a, std::size_t pos, const char* what) {
    if (pos >= a.size()) {
        throw MalformedAssignment(fmt::format("{} position {} out of range for length {}", what, pos, a.size()));
    }
}

}  // namespace

std::string_view to_string(OperatorId id) {
    switch (id) {
        case OperatorId::Crossover: return "crossover";
        case OperatorId::M1Inversion: return "M1_inversion";
        case OperatorId::M2Insertion: return "M2_insertion";
        case OperatorId::M3DoubleSegmentSwap: return "M3_double_segment_swap";
        case OperatorId::M4Balance: return "M4_balance";
        case OperatorId::M5ReciprocalExchange: return "M5_reciprocal_exchange";
        case OperatorId::M6Triplet: return "M6_triplet";
    }
    return "unknown";
}

Assignment crossover_with_mask(const Assignment& father, const Assignment& mother,
                               std::span<const bool> take_father) {
    if (father.size() != mother.size() || take_father.size() != father.size()) {
        throw MalformedAssignment(fmt::format("crossover length mismatch: father {}, mother {}, mask {}",
                                              father.size(), mother.size(), take_father.size()));
    }
    Assignment child;
    child.stage_of.resize(father.size());
    for (std::size_t i = 0; i < father.size(); ++i) {
        child[i] = take_father[i] ? father[i] : mother[i];
    }
    return child;
}

Assignment invert_segment(Assignment a, std::size_t u, std::size_t v) {
    require_in_range(a, u, "inversion");
    require_in_range(a, v, "inversion");
    if (u > v) std::swap(u, v);
    std::reverse(a.stage_of.begin() + static_cast<std::ptrdiff_t>(u),
                 a.stage_of.begin() + static_cast<std::ptrdiff_t>(v) + 1);
    return a;
}

Assignment move_entry(Assignment a, std::size_t from, std::size_t to) {
    require_in_range(a, from, "insertion source");
    require_in_range(a, to, "insertion target");
    auto first = a.stage_of.begin();
    if (from < to) {
        std::rotate(first + static_cast<std::ptrdiff_t>(from), first + static_cast<std::ptrdiff_t>(from) + 1,
                    first + static_cast<std::ptrdiff_t>(to) + 1);
    } else if (to < from) {
        std::rotate(first + static_cast<std::ptrdiff_t>(to), first + static_cast<std::ptrdiff_t>(from),
                    first + static_cast<std::ptrdiff_t>(from) + 1);
    }
    return a;
}

Assignment swap_segments(Assignment a, std::size_t split) {
    if (split > a.size()) {
        throw MalformedAssignment(fmt::format("split {} out of range for length {}", split, a.size()));
    }
    std::rotate(a.stage_of.begin(), a.stage_of.begin() + static_cast<std::ptrdiff_t>(split), a.stage_of.end());
    return a;
}

Assignment swap_entries(Assignment a, std::size_t i, std::size_t j) {
    require_in_range(a, i, "exchange");
    require_in_range(a, j, "exchange");
    std::swap(a[i], a[j]);
    return a;
}

Assignment rotate_triplet(Assignment a, std::size_t i, std::size_t j, std::size_t k) {
    require_in_range(a, i, "triplet");
    require_in_range(a, j, "triplet");
    require_in_range(a, k, "triplet");
    const int first = a[i];
    a[i] = a[j];
    a[j] = a[k];
    a[k] = first;
    return a;
}

Assignment reassign_worker(Assignment a, std::size_t worker, int stage) {
    require_in_range(a, worker, "worker");
    a[worker] = stage;
    return a;
}

Assignment crossover(const Assignment& father, const Assignment& mother, Rng& rng) {
    if (father.size() != mother.size()) {
        throw MalformedAssignment(fmt::format("crossover length mismatch: father {}, mother {}",
                                              father.size(), mother.size()));
    }
    std::bernoulli_distribution coin(0.5);
    Assignment child;
    child.stage_of.resize(father.size());
    for (std::size_t i = 0; i < father.size(); ++i) {
        child[i] = coin(rng) ? father[i] : mother[i];
    }
    return child;
}

Assignment mutate_inversion(const Assignment& a, Rng& rng) {
    if (a.size() < 2) return a;
    const std::size_t first = draw_index(rng, a.size());
    const std::size_t second = draw_index(rng, a.size());
    return invert_segment(a, std::min(first, second), std::max(first, second));
}

Assignment mutate_insertion(const Assignment& a, Rng& rng) {
    if (a.size() < 2) return a;
    const std::size_t from = draw_index(rng, a.size());
    std::size_t to = draw_index(rng, a.size() - 1);
    if (to >= from) ++to;
    return move_entry(a, from, to);
}

Assignment mutate_double_segment_swap(const Assignment& a, Rng& rng) {
    if (a.size() < 2) return a;
    const std::size_t split = 1 + draw_index(rng, a.size() - 1);
    return swap_segments(a, split);
}

Assignment mutate_reciprocal_exchange(const Assignment& a, Rng& rng) {
    if (a.size() < 2) return a;
    const std::size_t i = draw_index(rng, a.size());
    std::size_t j = draw_index(rng, a.size() - 1);
    if (j >= i) ++j;
    return swap_entries(a, i, j);
}

Assignment mutate_triplet(const Assignment& a, Rng& rng) {
    if (a.size() < 3) return mutate_reciprocal_exchange(a, rng);
    std::array<std::size_t, 3> pos{};
    pos[0] = draw_index(rng, a.size());
    pos[1] = draw_index(rng, a.size() - 1);
    if (pos[1] >= pos[0]) ++pos[1];
    pos[2] = draw_index(rng, a.size() - 2);
    const std::size_t lo = std::min(pos[0], pos[1]);
    const std::size_t hi = std::max(pos[0], pos[1]);
    if (pos[2] >= lo) ++pos[2];
    if (pos[2] >= hi) ++pos[2];
    std::ranges::sort(pos);
    return rotate_triplet(a, pos[0], pos[1], pos[2]);
}

BalanceMove plan_balance(const Instance& instance, const Assignment& a) {
    const auto profile = stage_profile(instance, a);
    const auto& p = profile.proc_times;
    const auto counts = occupancy(instance.num_stages(), a);

    BalanceMove move;
    move.weakest = static_cast<int>(std::ranges::max_element(p) - p.begin());
    const double slowest = p[static_cast<std::size_t>(move.weakest)];
    const double fastest = *std::ranges::min_element(p);
    if (slowest == fastest) {
        return move;
    }

    std::vector<int> order(p.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = static_cast<int>(j);
    std::ranges::stable_sort(order, [&](int lhs, int rhs) {
        return p[static_cast<std::size_t>(lhs)] < p[static_cast<std::size_t>(rhs)];
    });
    for (int stage : order) {
        if (stage != move.weakest && counts[static_cast<std::size_t>(stage)] >= 2) {
            move.donor = stage;
            break;
        }
    }
    return move;
}

Assignment mutate_balance(const Instance& instance, const Assignment& a, Rng& rng) {
    if (!is_legal(instance, a)) {
        throw IllegalAssignment("balance mutation requires a legal assignment");
    }
    const auto move = plan_balance(instance, a);
    if (!move.donor) return a;

    const int donor_label = *move.donor + 1;
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == donor_label) candidates.push_back(i);
    }
    const std::size_t worker = candidates[draw_index(rng, candidates.size())];
    return reassign_worker(a, worker, move.weakest + 1);
}

Assignment apply_mutation(OperatorId id, const Instance& instance, const Assignment& a, Rng& rng) {
    switch (id) {
        case OperatorId::M1Inversion: return mutate_inversion(a, rng);
        case OperatorId::M2Insertion: return mutate_insertion(a, rng);
        case OperatorId::M3DoubleSegmentSwap: return mutate_double_segment_swap(a, rng);
        case OperatorId::M4Balance: return mutate_balance(instance, a, rng);
        case OperatorId::M5ReciprocalExchange: return mutate_reciprocal_exchange(a, rng);
        case OperatorId::M6Triplet: return mutate_triplet(a, rng);
        case OperatorId::Crossover: break;
    }
    throw Error(fmt::format("{} is not a mutation operator", to_string(id)));
}

}  // namespace fsmsp
