#include "fsmsp/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <fmt/format.h>
#include <thread>

namespace fsmsp {

std::uint64_t assignment_space_size(int num_stages, int num_workers) {
    std::uint64_t size = 1;
    for (int i = 0; i < num_workers; ++i) {
        if (__builtin_mul_overflow(size, static_cast<std::uint64_t>(num_stages), &size)) {
            return UINT64_MAX;
        }
    }
    return size;
}

namespace {

struct Best {
    double t = 0.0;
    Assignment a;
    bool found = false;
    std::uint64_t legal = 0;

    void offer(double candidate, const Assignment& current) {
        ++legal;
        if (!found || candidate < t || (candidate == t && current < a)) {
            t = candidate;
            a = current;
            found = true;
        }
    }
    void merge(const Best& other) {
        legal += other.legal;
        if (!other.found) return;
        if (!found || other.t < t || (other.t == t && other.a < a)) {
            t = other.t;
            a = other.a;
            found = true;
        }
    }
};

// Depth-first odometer: worker R-1 is the slowest digit, worker 0 the fastest.
// Capacities are kept per depth so every leaf sums fresh, without subtraction.
class Enumerator {
public:
    explicit Enumerator(const Instance& instance)
        : instance_(instance),
          n_(static_cast<std::size_t>(instance.num_stages())),
          caps_((static_cast<std::size_t>(instance.num_workers()) + 1) * n_, 0.0),
          counts_(n_, 0),
          proc_(n_, 0.0) {
        current_.stage_of.assign(static_cast<std::size_t>(instance.num_workers()), 1);
    }

    /// Fixes the slowest `prefix.size()` workers, then enumerates the rest.
    Best run(std::span<const int> prefix) {
        best_ = Best{};
        std::fill(counts_.begin(), counts_.end(), 0);
        const int r = instance_.num_workers();
        double* top = level(r);
        std::fill(top, top + n_, 0.0);
        int empty = static_cast<int>(n_);
        int worker = r - 1;
        for (int label : prefix) {
            const auto s = static_cast<std::size_t>(label - 1);
            std::copy(level(worker + 1), level(worker + 1) + n_, level(worker));
            level(worker)[s] += instance_.proficiency(worker, static_cast<int>(s));
            if (counts_[s]++ == 0) --empty;
            current_[static_cast<std::size_t>(worker)] = label;
            --worker;
        }
        if (worker + 1 >= empty) descend(worker, empty);
        return best_;
    }

private:
    double* level(int remaining) { return caps_.data() + static_cast<std::size_t>(remaining) * n_; }

    void descend(int worker, int empty) {
        if (worker < 0) {
            const double* caps = level(0);
            for (std::size_t j = 0; j < n_; ++j) proc_[j] = instance_.unit_time(static_cast<int>(j)) / caps[j];
            best_.offer(completion_time_from_proc_times(proc_, instance_.num_products()), current_);
            return;
        }
        const double* above = level(worker + 1);
        double* here = level(worker);
        const auto row = instance_.proficiency_row(worker);
        for (std::size_t s = 0; s < n_; ++s) {
            const int still_empty = empty - (counts_[s] == 0 ? 1 : 0);
            // Workers 0..worker-1 remain; they must be able to fill every empty stage.
            if (worker < still_empty) continue;
            std::copy(above, above + n_, here);
            here[s] += row[s];
            ++counts_[s];
            current_[static_cast<std::size_t>(worker)] = static_cast<int>(s) + 1;
            descend(worker - 1, still_empty);
            --counts_[s];
        }
    }

    const Instance& instance_;
    std::size_t n_;
    std::vector<double> caps_;
    std::vector<int> counts_;
    std::vector<double> proc_;
    Assignment current_;
    Best best_;
};

}  // namespace

ExactResult exhaustive_optimum(const Instance& instance, std::uint64_t budget, unsigned threads) {
    const std::uint64_t space = assignment_space_size(instance.num_stages(), instance.num_workers());
    if (space > budget) {
        throw BudgetExceeded(fmt::format("{}^{} assignments exceed the enumeration budget of {}",
                                         instance.num_stages(), instance.num_workers(), budget));
    }
    threads = std::max(1u, threads);

    // Split on the slowest digits so there are a few tasks per thread.
    int prefix_len = 0;
    std::uint64_t tasks = 1;
    if (threads > 1) {
        while (prefix_len < instance.num_workers() && tasks < 4ull * threads) {
            tasks *= static_cast<std::uint64_t>(instance.num_stages());
            ++prefix_len;
        }
    }
    const auto n = static_cast<std::uint64_t>(instance.num_stages());
    auto prefix_of = [&](std::uint64_t task) {
        std::vector<int> prefix(static_cast<std::size_t>(prefix_len));
        // Most significant digit first so task order follows the odometer.
        for (int d = prefix_len - 1; d >= 0; --d) {
            prefix[static_cast<std::size_t>(d)] = static_cast<int>(task % n) + 1;
            task /= n;
        }
        return prefix;
    };

    std::vector<Best> partial(tasks);
    if (threads == 1 || tasks == 1) {
        Enumerator e(instance);
        for (std::uint64_t t = 0; t < tasks; ++t) partial[t] = e.run(prefix_of(t));
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                Enumerator e(instance);
                for (std::uint64_t t = next++; t < tasks; t = next++) partial[t] = e.run(prefix_of(t));
            });
        }
    }

    Best best;
    for (const auto& p : partial) best.merge(p);
    if (!best.found) {
        throw DomainError("no legal assignment exists");
    }
    ExactResult result;
    result.optimizer = best.a;
    result.optimum_T = completion_time(instance, best.a);
    result.states_enumerated = space;
    result.legal_states = best.legal;
    return result;
}

WaveReplay replay_state_waves(const Instance& instance, const Assignment& a) {
    if (!is_legal(instance, a)) {
        throw IllegalAssignment("state-wave replay requires a legal assignment");
    }
    const int n = instance.num_stages();
    const int d = instance.num_products();
    if (d < n) {
        throw DomainError(fmt::format("num_products ({}) below num_stages ({})", d, n));
    }

    // Stage capacity as the diagonal of X^T K.
    const ZeroOneMatrix x = decode(instance, a);
    std::vector<double> proc(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double capacity = 0.0;
        for (int i = 0; i < instance.num_workers(); ++i) {
            capacity += x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * instance.proficiency(i, j);
        }
        proc[static_cast<std::size_t>(j)] = instance.unit_time(j) / capacity;
    }

    WaveReplay replay;
    // Cycle c (1-based) has products on stages c-D+1 .. c, clipped to [1, N].
    for (int c = 1;; ++c) {
        const int first = std::max(1, c - d + 1);
        const int last = std::min(n, c);
        if (first > n) break;
        double cycle = 0.0;
        for (int j = first; j <= last; ++j) cycle = std::max(cycle, proc[static_cast<std::size_t>(j - 1)]);
        replay.total_time += cycle;
        ++replay.cycles;
    }
    return replay;
}

double simulate_state_waves(const Instance& instance, const Assignment& a) {
    return replay_state_waves(instance, a).total_time;
}

}  // namespace fsmsp
