#pragma once

/**
 * @file model.hpp
 * @brief Problem data and the completion-time objective for flow shop
 *        manpower scheduling.
 *
 * R workers are spread over N ordered stages of a paced production line that
 * processes D identical products. Worker i contributes proficiency k(i,j) to
 * the capacity of the stage j it is assigned to, and the per-product time of a
 * stage is its unit time divided by that capacity.
 *
 * Stage labels inside an Assignment are 1-based (1..N), matching the row
 * vector encoding used on disk. Worker and stage *indices* in the C++ API are
 * 0-based.
 */

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsmsp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInstance : public Error {
public:
    using Error::Error;
};

/// Wrong length, or a stage label outside [1, N].
class MalformedAssignment : public Error {
public:
    using Error::Error;
};

/// Well-formed, but some stage has no worker.
class IllegalAssignment : public Error {
public:
    using Error::Error;
};

/// A 0-1 matrix row without exactly one set entry.
class MalformedMatrix : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Immutable problem datum. The constructor validates every invariant.
class Instance {
public:
    Instance(int num_stages, int num_workers, int num_products,
             std::vector<double> unit_times,
             std::vector<std::vector<double>> proficiency);

    int num_stages() const noexcept { return num_stages_; }
    int num_workers() const noexcept { return num_workers_; }
    int num_products() const noexcept { return num_products_; }
    const std::vector<double>& unit_times() const noexcept { return unit_times_; }
    double unit_time(int stage) const { return unit_times_[static_cast<std::size_t>(stage)]; }

    /// k(worker, stage), both 0-based.
    double proficiency(int worker, int stage) const {
        return proficiency_[static_cast<std::size_t>(worker) * static_cast<std::size_t>(num_stages_) +
                            static_cast<std::size_t>(stage)];
    }
    /// Proficiencies of one worker across all stages.
    std::span<const double> proficiency_row(int worker) const {
        return {proficiency_.data() + static_cast<std::size_t>(worker) * static_cast<std::size_t>(num_stages_),
                static_cast<std::size_t>(num_stages_)};
    }
    std::vector<std::vector<double>> proficiency_matrix() const;

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    int num_stages_;
    int num_workers_;
    int num_products_;
    std::vector<double> unit_times_;
    std::vector<double> proficiency_;  // row-major R x N
};

/// Row-vector encoding of a worker schedule: stage_of[i] is the 1-based stage
/// worker i is assigned to.
struct Assignment {
    std::vector<int> stage_of;

    std::size_t size() const noexcept { return stage_of.size(); }
    int operator[](std::size_t i) const { return stage_of[i]; }
    int& operator[](std::size_t i) { return stage_of[i]; }

    friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

using ZeroOneMatrix = std::vector<std::vector<int>>;

struct StageProfile {
    std::vector<double> capacities;  ///< sum of assigned proficiencies per stage
    std::vector<double> proc_times;  ///< unit time / capacity per stage
};

struct RampProfile {
    std::vector<double> ramp_up;    ///< running max of proc_times from stage 1, size N
    std::vector<double> ramp_down;  ///< running max of proc_times towards stage N, stages 2..N (size N-1)
};

struct EvaluatedSolution {
    Assignment assignment;
    double completion_time = 0.0;
};

/// Throws MalformedAssignment when the length or any label is out of range.
void check_well_formed(const Instance& instance, const Assignment& a);

/// Every stage 1..N occupied by at least one worker.
bool is_legal(const Instance& instance, const Assignment& a);

/// Number of workers on each stage (0-based stage index).
std::vector<int> occupancy(int num_stages, const Assignment& a);

StageProfile stage_profile(const Instance& instance, const Assignment& a);

RampProfile ramp_profile(std::span<const double> proc_times);

/// Closed-form total completion time from per-stage processing times.
/// Requires num_products >= proc_times.size().
double completion_time_from_proc_times(std::span<const double> proc_times, int num_products);

double completion_time(const Instance& instance, const Assignment& a);

EvaluatedSolution evaluate(const Instance& instance, Assignment a);

Assignment encode(const Instance& instance, const ZeroOneMatrix& x);
ZeroOneMatrix decode(const Instance& instance, const Assignment& a);

/// C(R-1, N-1) * N!, the solution count quoted for the problem. It is not the
/// number of surjections from workers to stages.
struct SpaceSize {
    std::uint64_t value = 0;
    bool saturated = false;  ///< true when the count exceeded 2^64 - 1
};
SpaceSize solution_space_size(int num_stages, int num_workers);

/// Relative comparison used for completion times.
bool nearly_equal(double a, double b, double rel_tol = 1e-9);

}  // namespace fsmsp
