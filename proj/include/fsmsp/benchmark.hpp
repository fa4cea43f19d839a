#pragma once

/**
 * @file benchmark.hpp
 * @brief Instance generation, quality metrics and the experiment grid.
 *
 * Every (case, repetition) pair owns one generated instance that all
 * algorithms share. Each (case, repetition, algorithm) cell gets its own seed
 * derived from the master seed, so a report does not depend on how many
 * threads produced it.
 *
 * The approximation ratio of a cell is T / T*. T* is the exact optimum when
 * N^R fits the enumeration budget; otherwise it is the best completion time
 * any algorithm found on that instance, and the case is marked as using a
 * best-known reference.
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsmsp/model.hpp"
#include "fsmsp/oracles.hpp"
#include "fsmsp/sbmo.hpp"

namespace fsmsp {

enum class Algorithm { Sbmo, SbmoWn, Ga, Random };

std::string_view algorithm_name(Algorithm algorithm);
/// Accepts "sbmo", "sbmo-wn", "ga" and "random".
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct CaseSpec {
    int num_stages = 4;
    int num_workers = 12;
    int num_products = 100;
    int repetitions = 20;
    double unit_time_low = 1.0;
    double unit_time_high = 10.0;
    std::uint64_t seed = 0;

    std::string label() const;  ///< "N-R"
    void validate() const;
};

/// Lower bound of the proficiency draw; keeps every capacity positive.
inline constexpr double kMinProficiency = 1e-6;

/// k ~ U(1e-6, 1), t ~ U(low, high).
Instance generate_instance(const CaseSpec& spec, Rng& rng);

/// T / T*.
double approximation_ratio(double completion_time, double optimum);

/// Population standard deviation.
double standard_deviation(std::span<const double> values);

/// Mixes the master seed with cell coordinates into an independent seed.
std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> coordinates);

struct RunSettings {
    int population_size = 1000;
    int max_generations = 500;
    PlPolicy pl = PlPolicy::random_in(200, 1000);
    std::uint64_t enumeration_budget = kDefaultEnumerationBudget;
    unsigned threads = 1;
    bool record_timing = true;  ///< false reports every execution time as 0
};

/// Runs one algorithm on one instance with the given seed.
RunResult run_algorithm(Algorithm algorithm, const Instance& instance, const RunSettings& settings,
                        std::uint64_t seed);

struct RepetitionRow {
    Algorithm algorithm = Algorithm::Sbmo;
    std::uint64_t seed = 0;
    int rep = 0;
    double completion_time = 0.0;
    double reference = 0.0;  ///< T* (exact or best known)
    double gamma = 0.0;
    double exec_seconds = 0.0;
    std::optional<int> collapse_generation;
};

struct AlgorithmSummary {
    Algorithm algorithm = Algorithm::Sbmo;
    double mean_gamma = 0.0;
    double sd_completion_time = 0.0;
    double mean_exec_seconds = 0.0;
};

struct CaseReport {
    CaseSpec spec;
    bool exact_reference = false;
    std::vector<AlgorithmSummary> summaries;  ///< one per algorithm, in request order
    std::vector<RepetitionRow> rows;          ///< rep-major, then algorithm

    std::string label() const { return spec.label(); }
    const AlgorithmSummary& summary(Algorithm algorithm) const;
};

struct BenchmarkReport {
    std::vector<CaseReport> cases;
};

/// N from 4 to 12 step 2, R from 12 to 32 step 4: 30 cases.
std::vector<CaseSpec> default_grid(int repetitions = 20, int num_products = 100);

BenchmarkReport run_grid(std::span<const CaseSpec> cases, std::span<const Algorithm> algorithms,
                         const RunSettings& settings, std::uint64_t master_seed);

/// Writes report.csv, summary.csv and cases.csv into `out_dir`.
void write_report(const BenchmarkReport& report, const std::filesystem::path& out_dir);

std::string report_csv(const BenchmarkReport& report);
std::string summary_csv(const BenchmarkReport& report);
std::string cases_csv(const BenchmarkReport& report);

struct PlSweepRow {
    int pl = 0;
    double mean_completion_time = 0.0;
    int repetitions = 0;
};

/// Mean final completion time of the optimizer for each fixed reach. Every pl
/// value runs on the same `spec.repetitions` instances.
std::vector<PlSweepRow> pl_sweep(const CaseSpec& spec, std::span<const int> pl_values,
                                 const RunSettings& settings, std::uint64_t master_seed);

std::string pl_sweep_csv(std::span<const PlSweepRow> rows);

}  // namespace fsmsp
