#include "fsmsp/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <random>

#include "fsmsp/baselines.hpp"
#include "fsmsp/io.hpp"
#include "fsmsp/parallel.hpp"

namespace fsmsp {

namespace {

constexpr std::uint64_t kInstanceStream = 0;

std::uint64_t algorithm_stream(Algorithm algorithm) { return 1 + static_cast<std::uint64_t>(algorithm); }

std::string optional_int(const std::optional<int>& value) {
    return value ? std::to_string(*value) : std::string();
}

}  // namespace

std::string_view algorithm_name(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::Sbmo: return "sbmo";
        case Algorithm::SbmoWn: return "sbmo-wn";
        case Algorithm::Ga: return "ga";
        case Algorithm::Random: return "random";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (Algorithm a : {Algorithm::Sbmo, Algorithm::SbmoWn, Algorithm::Ga, Algorithm::Random}) {
        if (algorithm_name(a) == name) return a;
    }
    return std::nullopt;
}

std::string CaseSpec::label() const { return fmt::format("{}-{}", num_stages, num_workers); }

void CaseSpec::validate() const {
    if (num_stages < 1 || num_workers < num_stages) {
        throw InvalidInstance(fmt::format("case {}: need workers >= stages >= 1", label()));
    }
    if (num_products < num_stages) {
        throw InvalidInstance(fmt::format("case {}: num_products {} below num_stages", label(), num_products));
    }
    if (repetitions < 1) {
        throw InvalidConfig(fmt::format("case {}: repetitions must be >= 1", label()));
    }
    if (!(unit_time_low > 0.0) || unit_time_high < unit_time_low) {
        throw InvalidConfig(fmt::format("case {}: unit time range [{}, {}] invalid", label(), unit_time_low,
                                        unit_time_high));
    }
}

Instance generate_instance(const CaseSpec& spec, Rng& rng) {
    spec.validate();
    std::uniform_real_distribution<double> unit(spec.unit_time_low, spec.unit_time_high);
    std::uniform_real_distribution<double> skill(kMinProficiency, 1.0);
    std::vector<double> t(static_cast<std::size_t>(spec.num_stages));
    for (double& v : t) v = unit(rng);
    std::vector<std::vector<double>> k(static_cast<std::size_t>(spec.num_workers),
                                       std::vector<double>(static_cast<std::size_t>(spec.num_stages)));
    for (auto& row : k) {
        for (double& v : row) v = skill(rng);
    }
    return Instance(spec.num_stages, spec.num_workers, spec.num_products, std::move(t), std::move(k));
}

double approximation_ratio(double completion_time, double optimum) {
    if (!(optimum > 0.0)) {
        throw DomainError(fmt::format("approximation ratio needs a positive optimum, got {}", optimum));
    }
    return completion_time / optimum;
}

double standard_deviation(std::span<const double> values) {
    if (values.empty()) throw DomainError("standard deviation of an empty sample");
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double squares = 0.0;
    for (double v : values) squares += (v - mean) * (v - mean);
    return std::sqrt(squares / static_cast<double>(values.size()));
}

std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> coordinates) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * coordinates.size());
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(master);
    for (auto c : coordinates) push(c);
    std::seed_seq seq(words.begin(), words.end());
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

RunResult run_algorithm(Algorithm algorithm, const Instance& instance, const RunSettings& settings,
                        std::uint64_t seed) {
    switch (algorithm) {
        case Algorithm::Sbmo:
        case Algorithm::SbmoWn: {
            SolverConfig config;
            config.population_size = settings.population_size;
            config.max_generations = settings.max_generations;
            config.pl = settings.pl;
            config.seed = seed;
            config.neighborhood_search_enabled = algorithm == Algorithm::Sbmo;
            return solve(instance, config);
        }
        case Algorithm::Ga:
        case Algorithm::Random: {
            BaselineConfig config;
            config.algorithm = algorithm == Algorithm::Ga ? BaselineAlgorithm::GA : BaselineAlgorithm::Random;
            config.population_size = settings.population_size;
            config.max_generations = settings.max_generations;
            config.seed = seed;
            return run_baseline(instance, config);
        }
    }
    throw InvalidConfig("unknown algorithm");
}

const AlgorithmSummary& CaseReport::summary(Algorithm algorithm) const {
    for (const auto& s : summaries) {
        if (s.algorithm == algorithm) return s;
    }
    throw Error(fmt::format("case {} has no {} summary", label(), algorithm_name(algorithm)));
}

std::vector<CaseSpec> default_grid(int repetitions, int num_products) {
    std::vector<CaseSpec> cases;
    for (int n = 4; n <= 12; n += 2) {
        for (int r = 12; r <= 32; r += 4) {
            CaseSpec spec;
            spec.num_stages = n;
            spec.num_workers = r;
            spec.num_products = num_products;
            spec.repetitions = repetitions;
            cases.push_back(spec);
        }
    }
    return cases;
}

BenchmarkReport run_grid(std::span<const CaseSpec> cases, std::span<const Algorithm> algorithms,
                         const RunSettings& settings, std::uint64_t master_seed) {
    BenchmarkReport report;
    if (algorithms.empty()) return report;
    for (const auto& spec : cases) spec.validate();

    // Instances and exact references, one slot per (case, rep).
    struct Slot {
        std::size_t case_index;
        int rep;
        std::optional<Instance> instance;
        std::optional<double> exact;
    };
    std::vector<Slot> slots;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        for (int rep = 0; rep < cases[c].repetitions; ++rep) slots.push_back({c, rep, std::nullopt, std::nullopt});
    }
    parallel_for(slots.size(), settings.threads, [&](std::size_t i) {
        Slot& slot = slots[i];
        const CaseSpec& spec = cases[slot.case_index];
        const std::array<std::uint64_t, 4> coords{spec.seed, slot.case_index, static_cast<std::uint64_t>(slot.rep),
                                                  kInstanceStream};
        Rng rng(derive_seed(master_seed, coords));
        slot.instance.emplace(generate_instance(spec, rng));
        if (assignment_space_size(spec.num_stages, spec.num_workers) <= settings.enumeration_budget) {
            slot.exact = exhaustive_optimum(*slot.instance, settings.enumeration_budget).optimum_T;
        }
    });

    // One solver run per (slot, algorithm).
    std::vector<RepetitionRow> cells(slots.size() * algorithms.size());
    parallel_for(cells.size(), settings.threads, [&](std::size_t i) {
        const Slot& slot = slots[i / algorithms.size()];
        const Algorithm algorithm = algorithms[i % algorithms.size()];
        const CaseSpec& spec = cases[slot.case_index];
        const std::array<std::uint64_t, 4> coords{spec.seed, slot.case_index, static_cast<std::uint64_t>(slot.rep),
                                                  algorithm_stream(algorithm)};
        RepetitionRow& row = cells[i];
        row.algorithm = algorithm;
        row.seed = derive_seed(master_seed, coords);
        row.rep = slot.rep;
        const RunResult result = run_algorithm(algorithm, *slot.instance, settings, row.seed);
        row.completion_time = result.best.completion_time;
        row.exec_seconds = settings.record_timing ? result.wall_seconds : 0.0;
        row.collapse_generation = result.collapse_generation;
    });

    std::size_t next_cell = 0;
    std::size_t next_slot = 0;
    for (const auto& spec : cases) {
        CaseReport cr;
        cr.spec = spec;
        cr.exact_reference = assignment_space_size(spec.num_stages, spec.num_workers) <= settings.enumeration_budget;
        for (int rep = 0; rep < spec.repetitions; ++rep, ++next_slot) {
            const auto first = cells.begin() + static_cast<std::ptrdiff_t>(next_cell);
            const auto last = first + static_cast<std::ptrdiff_t>(algorithms.size());
            double reference = 0.0;
            if (slots[next_slot].exact) {
                reference = *slots[next_slot].exact;
            } else {
                reference = std::min_element(first, last, [](const auto& a, const auto& b) {
                                return a.completion_time < b.completion_time;
                            })->completion_time;
            }
            for (auto it = first; it != last; ++it) {
                it->reference = reference;
                it->gamma = approximation_ratio(it->completion_time, reference);
                cr.rows.push_back(*it);
            }
            next_cell += algorithms.size();
        }
        for (Algorithm algorithm : algorithms) {
            std::vector<double> t;
            double gamma_sum = 0.0;
            double exec_sum = 0.0;
            for (const auto& row : cr.rows) {
                if (row.algorithm != algorithm) continue;
                t.push_back(row.completion_time);
                gamma_sum += row.gamma;
                exec_sum += row.exec_seconds;
            }
            const auto count = static_cast<double>(t.size());
            cr.summaries.push_back({algorithm, gamma_sum / count, standard_deviation(t), exec_sum / count});
        }
        report.cases.push_back(std::move(cr));
    }
    return report;
}

std::string report_csv(const BenchmarkReport& report) {
    std::string out = "case,algorithm,seed,rep,T,T_star,gamma,sd_group,exec_seconds,collapse_generation\n";
    for (const auto& c : report.cases) {
        for (const auto& row : c.rows) {
            out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", c.label(), algorithm_name(row.algorithm), row.seed,
                               row.rep, format_real(row.completion_time), format_real(row.reference),
                               format_real(row.gamma), format_real(c.summary(row.algorithm).sd_completion_time),
                               format_real(row.exec_seconds), optional_int(row.collapse_generation));
        }
    }
    return out;
}

std::string summary_csv(const BenchmarkReport& report) {
    std::string out = "case,algorithm,mean_gamma,sd_T,mean_exec_seconds\n";
    for (const auto& c : report.cases) {
        for (const auto& s : c.summaries) {
            out += fmt::format("{},{},{},{},{}\n", c.label(), algorithm_name(s.algorithm), format_real(s.mean_gamma),
                               format_real(s.sd_completion_time), format_real(s.mean_exec_seconds));
        }
    }
    return out;
}

std::string cases_csv(const BenchmarkReport& report) {
    std::string out = "case,num_stages,num_workers,num_products,repetitions,gamma_reference\n";
    for (const auto& c : report.cases) {
        out += fmt::format("{},{},{},{},{},{}\n", c.label(), c.spec.num_stages, c.spec.num_workers,
                           c.spec.num_products, c.spec.repetitions, c.exact_reference ? "exact" : "best_known");
    }
    return out;
}

void write_report(const BenchmarkReport& report, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));
    write_text_file(out_dir / "report.csv", report_csv(report));
    write_text_file(out_dir / "summary.csv", summary_csv(report));
    write_text_file(out_dir / "cases.csv", cases_csv(report));
}

std::vector<PlSweepRow> pl_sweep(const CaseSpec& spec, std::span<const int> pl_values, const RunSettings& settings,
                                 std::uint64_t master_seed) {
    spec.validate();
    for (int pl : pl_values) {
        if (pl < 0 || pl > settings.population_size) {
            throw InvalidConfig(fmt::format("pl {} outside [0, {}]", pl, settings.population_size));
        }
    }
    std::vector<std::optional<Instance>> instances(static_cast<std::size_t>(spec.repetitions));
    parallel_for(instances.size(), settings.threads, [&](std::size_t rep) {
        const std::array<std::uint64_t, 3> coords{spec.seed, static_cast<std::uint64_t>(rep), kInstanceStream};
        Rng rng(derive_seed(master_seed, coords));
        instances[rep].emplace(generate_instance(spec, rng));
    });

    const std::size_t reps = instances.size();
    std::vector<double> finals(pl_values.size() * reps);
    parallel_for(finals.size(), settings.threads, [&](std::size_t i) {
        const std::size_t p = i / reps;
        const std::size_t rep = i % reps;
        SolverConfig config;
        config.population_size = settings.population_size;
        config.max_generations = settings.max_generations;
        config.pl = PlPolicy::fixed(pl_values[p]);
        // Same stream for every pl value so the comparison is paired.
        const std::array<std::uint64_t, 3> coords{spec.seed, static_cast<std::uint64_t>(rep),
                                                  algorithm_stream(Algorithm::Sbmo)};
        config.seed = derive_seed(master_seed, coords);
        finals[i] = solve(*instances[rep], config).best.completion_time;
    });

    std::vector<PlSweepRow> rows;
    for (std::size_t p = 0; p < pl_values.size(); ++p) {
        const auto first = finals.begin() + static_cast<std::ptrdiff_t>(p * reps);
        const double mean = std::accumulate(first, first + static_cast<std::ptrdiff_t>(reps), 0.0) /
                            static_cast<double>(reps);
        rows.push_back({pl_values[p], mean, static_cast<int>(reps)});
    }
    return rows;
}

std::string pl_sweep_csv(std::span<const PlSweepRow> rows) {
    std::string out = "pl,mean_T,repetitions\n";
    for (const auto& row : rows) {
        out += fmt::format("{},{},{}\n", row.pl, format_real(row.mean_completion_time), row.repetitions);
    }
    return out;
}

}  // namespace fsmsp
