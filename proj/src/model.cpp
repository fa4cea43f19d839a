#include "fsmsp/model.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace fsmsp {

Instance::Instance(int num_stages, int num_workers, int num_products,
                   std::vector<double> unit_times,
                   std::vector<std::vector<double>> proficiency)
    : num_stages_(num_stages),
      num_workers_(num_workers),
      num_products_(num_products),
      unit_times_(std::move(unit_times)) {
    if (num_stages_ < 1) {
        throw InvalidInstance(fmt::format("num_stages must be >= 1, got {}", num_stages_));
    }
    if (num_workers_ < num_stages_) {
        throw InvalidInstance(fmt::format(
            "num_workers ({}) must be >= num_stages ({}): every stage needs at least one worker",
            num_workers_, num_stages_));
    }
    if (num_products_ < num_stages_) {
        throw InvalidInstance(fmt::format("num_products ({}) must be >= num_stages ({})",
                                          num_products_, num_stages_));
    }
    if (unit_times_.size() != static_cast<std::size_t>(num_stages_)) {
        throw InvalidInstance(fmt::format("unit_times has {} entries, expected {}",
                                          unit_times_.size(), num_stages_));
    }
    for (std::size_t j = 0; j < unit_times_.size(); ++j) {
        if (!(unit_times_[j] > 0.0) || !std::isfinite(unit_times_[j])) {
            throw InvalidInstance(fmt::format("unit_times[{}] = {} is not a positive finite number",
                                              j, unit_times_[j]));
        }
    }
    if (proficiency.size() != static_cast<std::size_t>(num_workers_)) {
        throw InvalidInstance(fmt::format("proficiency has {} rows, expected {}",
                                          proficiency.size(), num_workers_));
    }
    proficiency_.reserve(static_cast<std::size_t>(num_workers_) * static_cast<std::size_t>(num_stages_));
    for (std::size_t i = 0; i < proficiency.size(); ++i) {
        const auto& row = proficiency[i];
        if (row.size() != static_cast<std::size_t>(num_stages_)) {
            throw InvalidInstance(fmt::format("proficiency row {} has {} entries, expected {}",
                                              i, row.size(), num_stages_));
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (!(row[j] > 0.0 && row[j] <= 1.0)) {
                throw InvalidInstance(fmt::format("proficiency[{}][{}] = {} outside (0, 1]", i, j, row[j]));
            }
            proficiency_.push_back(row[j]);
        }
    }
}

std::vector<std::vector<double>> Instance::proficiency_matrix() const {
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(num_workers_));
    for (int i = 0; i < num_workers_; ++i) {
        auto row = proficiency_row(i);
        rows.emplace_back(row.begin(), row.end());
    }
    return rows;
}

void check_well_formed(const Instance& instance, const Assignment& a) {
    if (a.size() != static_cast<std::size_t>(instance.num_workers())) {
        throw MalformedAssignment(fmt::format("assignment has length {}, expected {}",
                                              a.size(), instance.num_workers()));
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 1 || a[i] > instance.num_stages()) {
            throw MalformedAssignment(fmt::format("worker {} assigned to stage {}, valid range is [1, {}]",
                                                  i + 1, a[i], instance.num_stages()));
        }
    }
}

std::vector<int> occupancy(int num_stages, const Assignment& a) {
    std::vector<int> counts(static_cast<std::size_t>(num_stages), 0);
    for (int s : a.stage_of) {
        ++counts[static_cast<std::size_t>(s - 1)];
    }
    return counts;
}

bool is_legal(const Instance& instance, const Assignment& a) {
    check_well_formed(instance, a);
    const auto counts = occupancy(instance.num_stages(), a);
    return std::ranges::none_of(counts, [](int c) { return c == 0; });
}

StageProfile stage_profile(const Instance& instance, const Assignment& a) {
    check_well_formed(instance, a);
    const auto n = static_cast<std::size_t>(instance.num_stages());
    StageProfile profile{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int stage = a[i] - 1;
        profile.capacities[static_cast<std::size_t>(stage)] += instance.proficiency(static_cast<int>(i), stage);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (profile.capacities[j] <= 0.0) {
            throw IllegalAssignment(fmt::format("stage {} has no worker", j + 1));
        }
        profile.proc_times[j] = instance.unit_time(static_cast<int>(j)) / profile.capacities[j];
    }
    return profile;
}

RampProfile ramp_profile(std::span<const double> proc_times) {
    RampProfile ramp;
    const std::size_t n = proc_times.size();
    ramp.ramp_up.resize(n);
    double running = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        running = std::max(running, proc_times[j]);
        ramp.ramp_up[j] = running;
    }
    if (n > 1) {
        ramp.ramp_down.resize(n - 1);
        running = 0.0;
        for (std::size_t j = n; j-- > 1;) {
            running = std::max(running, proc_times[j]);
            ramp.ramp_down[j - 1] = running;
        }
    }
    return ramp;
}

double completion_time_from_proc_times(std::span<const double> proc_times, int num_products) {
    const std::size_t n = proc_times.size();
    // Ramp-up terms Y_1..Y_{N-1} and the bottleneck Y_N.
    double ramp_up_sum = 0.0;
    double prefix_max = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        prefix_max = std::max(prefix_max, proc_times[j]);
        ramp_up_sum += prefix_max;
    }
    const double bottleneck = std::max(prefix_max, proc_times[n - 1]);
    // Ramp-down terms for stages 2..N, accumulated from the last stage.
    double ramp_down_sum = 0.0;
    double suffix_max = 0.0;
    for (std::size_t j = n; j-- > 1;) {
        suffix_max = std::max(suffix_max, proc_times[j]);
        ramp_down_sum += suffix_max;
    }
    const auto full_cycles = static_cast<double>(num_products - static_cast<int>(n) + 1);
    return ramp_up_sum + full_cycles * bottleneck + ramp_down_sum;
}

double completion_time(const Instance& instance, const Assignment& a) {
    const auto profile = stage_profile(instance, a);
    return completion_time_from_proc_times(profile.proc_times, instance.num_products());
}

EvaluatedSolution evaluate(const Instance& instance, Assignment a) {
    const double t = completion_time(instance, a);
    return {std::move(a), t};
}

Assignment encode(const Instance& instance, const ZeroOneMatrix& x) {
    if (x.size() != static_cast<std::size_t>(instance.num_workers())) {
        throw MalformedMatrix(fmt::format("matrix has {} rows, expected {}", x.size(), instance.num_workers()));
    }
    Assignment a;
    a.stage_of.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& row = x[i];
        if (row.size() != static_cast<std::size_t>(instance.num_stages())) {
            throw MalformedMatrix(fmt::format("row {} has {} columns, expected {}",
                                              i + 1, row.size(), instance.num_stages()));
        }
        int stage = 0;
        int ones = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] == 1) {
                ++ones;
                stage = static_cast<int>(j) + 1;
            } else if (row[j] != 0) {
                throw MalformedMatrix(fmt::format("entry ({}, {}) = {} is not 0 or 1", i + 1, j + 1, row[j]));
            }
        }
        if (ones != 1) {
            throw MalformedMatrix(fmt::format("row {} has {} ones, expected exactly 1", i + 1, ones));
        }
        a.stage_of.push_back(stage);
    }
    return a;
}

ZeroOneMatrix decode(const Instance& instance, const Assignment& a) {
    check_well_formed(instance, a);
    ZeroOneMatrix x(a.size(), std::vector<int>(static_cast<std::size_t>(instance.num_stages()), 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        x[i][static_cast<std::size_t>(a[i] - 1)] = 1;
    }
    return x;
}

SpaceSize solution_space_size(int num_stages, int num_workers) {
    if (num_stages < 1 || num_workers < num_stages) {
        throw DomainError(fmt::format("solution space needs workers >= stages >= 1, got N={} R={}",
                                      num_stages, num_workers));
    }
    SpaceSize out{1, false};
    // C(R-1, N-1) built incrementally; each partial product is itself a binomial.
    const std::uint64_t n = static_cast<std::uint64_t>(num_workers - 1);
    const std::uint64_t k = static_cast<std::uint64_t>(num_stages - 1);
    unsigned __int128 binom = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        binom = binom * (n - k + i) / i;
        if (binom > UINT64_MAX) {
            return {UINT64_MAX, true};
        }
    }
    std::uint64_t value = static_cast<std::uint64_t>(binom);
    for (std::uint64_t f = 2; f <= static_cast<std::uint64_t>(num_stages); ++f) {
        if (__builtin_mul_overflow(value, f, &value)) {
            return {UINT64_MAX, true};
        }
    }
    out.value = value;
    return out;
}

bool nearly_equal(double a, double b, double rel_tol) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) <= rel_tol * scale;
}

}  // namespace fsmsp
