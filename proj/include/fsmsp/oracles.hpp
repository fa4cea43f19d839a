#pragma once

// Ground truth: exact optimum by enumeration, and a cycle-by-cycle replay of
// the paced line used to cross-check the closed-form completion time.

#include <cstdint>

#include "fsmsp/model.hpp"

namespace fsmsp {

/// N^R exceeds the caller's enumeration budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

struct ExactResult {
    double optimum_T = 0.0;
    Assignment optimizer;
    std::uint64_t states_enumerated = 0;  ///< N^R, the full assignment space covered
    std::uint64_t legal_states = 0;       ///< assignments that passed the legality check
};

/// N^R, saturated at UINT64_MAX.
std::uint64_t assignment_space_size(int num_stages, int num_workers);

/// Minimizes completion time over every assignment. Ties go to the
/// lexicographically smallest vector. `threads` only changes the schedule,
/// never the result.
ExactResult exhaustive_optimum(const Instance& instance,
                               std::uint64_t budget = kDefaultEnumerationBudget,
                               unsigned threads = 1);

struct WaveReplay {
    double total_time = 0.0;
    int cycles = 0;
};

/// Replays the line one synchronized cycle at a time. In cycle c product k
/// sits on stage c - k + 1, and the cycle lasts as long as the slowest
/// occupied stage.
WaveReplay replay_state_waves(const Instance& instance, const Assignment& a);

double simulate_state_waves(const Instance& instance, const Assignment& a);

}  // namespace fsmsp
