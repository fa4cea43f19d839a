#include "fsmsp/cli.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fsmsp/benchmark.hpp"
#include "fsmsp/io.hpp"
#include "fsmsp/oracles.hpp"
#include "fsmsp/parallel.hpp"
#include "fsmsp/sbmo.hpp"

namespace fsmsp::cli {

namespace {

namespace fs = std::filesystem;

struct GenOptions {
    int stages = 0;
    int workers = 0;
    int products = 100;
    std::uint64_t seed = 0;
    double t_lo = 1.0;
    double t_hi = 10.0;
    std::string out;
};

struct SolveOptions {
    std::string in;
    std::string algo = "sbmo";
    int pop_size = 1000;
    int generations = 500;
    int pl = -1;
    bool pl_random = false;
    std::uint64_t seed = 0;
    std::string out;
    std::string trace;
    bool omit_timing = false;
};

struct ExactOptions {
    std::string in;
    std::uint64_t budget = kDefaultEnumerationBudget;
    std::string out;
    unsigned threads = default_thread_count();
};

struct ValidateOptions {
    int trials = 1000;
    std::uint64_t seed = 0;
};

struct BenchOptions {
    std::string grid = "default";
    std::string algos = "sbmo,sbmo-wn";
    int reps = 20;
    int products = 100;
    std::uint64_t seed = 0;
    int pop_size = 1000;
    int generations = 500;
    std::uint64_t budget = kDefaultEnumerationBudget;
    std::string out;
    unsigned threads = default_thread_count();
    bool omit_timing = false;
};

struct SweepOptions {
    int stages = 12;
    int workers = 20;
    int products = 100;
    std::string pl_list = "0,50,100,200,300,500,700,1000";
    int reps = 10;
    std::uint64_t seed = 0;
    int pop_size = 1000;
    int generations = 500;
    std::string out;
    unsigned threads = default_thread_count();
};

/// Input problem reported with exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

void ensure_parent_dir(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError(fmt::format("cannot create {}: {}", path.parent_path().string(), ec.message()));
    }
}

int cmd_gen(const GenOptions& o, std::ostream& out, std::ostream& err) {
    if (o.workers < o.stages) {
        err << fmt::format("error: --workers ({}) is smaller than --stages ({}); each stage needs at least one worker\n",
                           o.workers, o.stages);
        return kInputError;
    }
    CaseSpec spec;
    spec.num_stages = o.stages;
    spec.num_workers = o.workers;
    spec.num_products = o.products;
    spec.unit_time_low = o.t_lo;
    spec.unit_time_high = o.t_hi;
    Rng rng(o.seed);
    const Instance instance = generate_instance(spec, rng);
    ensure_parent_dir(o.out);
    save_instance(o.out, instance);
    const SpaceSize space = solution_space_size(o.stages, o.workers);
    out << "wrote " << o.out << "\n";
    out << "solution_space_size " << space.value << (space.saturated ? " (saturated)" : "") << "\n";
    return kSuccess;
}

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream&) {
    const Instance instance = load_instance(o.in);
    const auto algorithm = parse_algorithm(o.algo);
    if (!algorithm) throw InputError(fmt::format("unknown algorithm '{}'", o.algo));

    RunSettings settings;
    settings.population_size = o.pop_size;
    settings.max_generations = o.generations;
    settings.pl = o.pl >= 0 ? PlPolicy::fixed(o.pl) : PlPolicy::random_in(200, 1000);
    const RunResult result = run_algorithm(*algorithm, instance, settings, o.seed);

    if (!is_legal(instance, result.best.assignment) ||
        !nearly_equal(result.best.completion_time, completion_time(instance, result.best.assignment))) {
        throw std::logic_error("solver returned an inconsistent best solution");
    }

    ResultMetadata meta{std::string(algorithm_name(*algorithm)), o.seed, !o.omit_timing};
    ensure_parent_dir(o.out);
    write_text_file(o.out, dump_canonical(to_json(instance, result, meta)));
    if (!o.trace.empty()) {
        std::ostringstream csv;
        write_trace_csv(csv, result);
        ensure_parent_dir(o.trace);
        write_text_file(o.trace, csv.str());
    }
    out << fmt::format("T = {} after {} generations\n", format_real(result.best.completion_time),
                       result.generations_run);
    return kSuccess;
}

int cmd_exact(const ExactOptions& o, std::ostream& out, std::ostream& err) {
    const Instance instance = load_instance(o.in);
    try {
        const ExactResult result = exhaustive_optimum(instance, o.budget, o.threads);
        ensure_parent_dir(o.out);
        write_text_file(o.out, dump_canonical(to_json(result)));
        out << fmt::format("T* = {} over {} states\n", format_real(result.optimum_T), result.states_enumerated);
        return kSuccess;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kBudgetExceeded;
    }
}

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err) {
    if (o.trials < 0) throw InputError("--trials must be non-negative");
    if (o.trials == 0) {
        err << "warning: --trials 0 checks nothing\n";
        out << "max relative deviation 0\n";
        return kSuccess;
    }
    Rng rng(o.seed);
    double worst = 0.0;
    for (int trial = 0; trial < o.trials; ++trial) {
        CaseSpec spec;
        spec.num_stages = std::uniform_int_distribution<int>(1, 12)(rng);
        spec.num_workers = std::uniform_int_distribution<int>(spec.num_stages, 32)(rng);
        spec.num_products = std::uniform_int_distribution<int>(spec.num_stages, 200)(rng);
        const Instance instance = generate_instance(spec, rng);
        const Assignment a = random_legal_assignment(spec.num_stages, spec.num_workers, rng);
        const double closed = completion_time(instance, a);
        const double replayed = simulate_state_waves(instance, a);
        const double deviation = std::abs(closed - replayed) / std::max(std::abs(replayed), 1e-300);
        worst = std::max(worst, deviation);
        if (deviation > 1e-9) {
            err << fmt::format("mismatch on trial {}: closed form {} vs replay {}\n", trial, format_real(closed),
                               format_real(replayed));
            err << "instance: " << to_json(instance).dump() << "\n";
            err << "assignment: " << to_json(a).dump() << "\n";
            return kValidationFailure;
        }
    }
    out << fmt::format("{} trials passed, max relative deviation {}\n", o.trials, format_real(worst));
    return kSuccess;
}

std::vector<CaseSpec> load_grid(const BenchOptions& o) {
    if (o.grid == "default") return default_grid(o.reps, o.products);
    const nlohmann::json doc = [&] {
        try {
            return nlohmann::json::parse(read_text_file(o.grid));
        } catch (const nlohmann::json::exception& e) {
            throw IoError(fmt::format("{}: {}", o.grid, e.what()));
        }
    }();
    if (!doc.is_array()) throw IoError(fmt::format("{}: grid must be a JSON array of cases", o.grid));
    std::vector<CaseSpec> cases;
    try {
        for (const auto& item : doc) {
            CaseSpec spec;
            spec.num_stages = item.at("num_stages").get<int>();
            spec.num_workers = item.at("num_workers").get<int>();
            spec.num_products = item.value("num_products", o.products);
            spec.repetitions = item.value("repetitions", o.reps);
            spec.unit_time_low = item.value("unit_time_low", spec.unit_time_low);
            spec.unit_time_high = item.value("unit_time_high", spec.unit_time_high);
            cases.push_back(spec);
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(fmt::format("{}: {}", o.grid, e.what()));
    }
    return cases;
}

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream&) {
    std::vector<Algorithm> algorithms;
    for (const auto& name : split_list(o.algos)) {
        const auto a = parse_algorithm(name);
        if (!a) throw InputError(fmt::format("unknown algorithm '{}' in --algos", name));
        algorithms.push_back(*a);
    }
    const auto cases = load_grid(o);
    RunSettings settings;
    settings.population_size = o.pop_size;
    settings.max_generations = o.generations;
    settings.enumeration_budget = o.budget;
    settings.threads = o.threads;
    settings.record_timing = !o.omit_timing;
    const BenchmarkReport report = run_grid(cases, algorithms, settings, o.seed);
    write_report(report, o.out);
    out << fmt::format("{} cases x {} algorithms written to {}\n", report.cases.size(), algorithms.size(), o.out);
    return kSuccess;
}

int cmd_pl_sweep(const SweepOptions& o, std::ostream& out, std::ostream&) {
    std::vector<int> pl_values;
    for (const auto& item : split_list(o.pl_list)) {
        try {
            std::size_t used = 0;
            pl_values.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw InputError(fmt::format("--pl-list entry '{}' is not an integer", item));
        }
    }
    CaseSpec spec;
    spec.num_stages = o.stages;
    spec.num_workers = o.workers;
    spec.num_products = o.products;
    spec.repetitions = o.reps;
    RunSettings settings;
    settings.population_size = o.pop_size;
    settings.max_generations = o.generations;
    settings.threads = o.threads;
    const auto rows = pl_sweep(spec, pl_values, settings, o.seed);
    std::error_code ec;
    fs::create_directories(o.out, ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", o.out, ec.message()));
    const fs::path path = fs::path(o.out) / "pl_sweep.csv";
    write_text_file(path, pl_sweep_csv(rows));
    out << fmt::format("{} pl values written to {}\n", rows.size(), path.string());
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Flow shop manpower scheduling: generate, solve, verify and benchmark"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance file");
    gen_cmd->add_option("--stages", gen.stages, "Number of stages N")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--workers", gen.workers, "Number of workers R")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--products", gen.products, "Number of products D")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    gen_cmd->add_option("--t-lo", gen.t_lo, "Lower bound of unit times")->capture_default_str();
    gen_cmd->add_option("--t-hi", gen.t_hi, "Upper bound of unit times")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output instance JSON")->required();

    SolveOptions solve_o;
    auto* solve_cmd = app.add_subcommand("solve", "Solve an instance");
    solve_cmd->add_option("--in", solve_o.in, "Instance JSON")->required();
    solve_cmd->add_option("--algo", solve_o.algo, "Algorithm")
        ->check(CLI::IsMember({"sbmo", "sbmo-wn", "ga", "random"}))
        ->capture_default_str();
    solve_cmd->add_option("--pop-size", solve_o.pop_size, "Population size Q")->capture_default_str();
    solve_cmd->add_option("--generations", solve_o.generations, "Generations G")->capture_default_str();
    auto* pl_opt = solve_cmd->add_option("--pl", solve_o.pl, "Fixed mating reach in [0, Q]")
                       ->check(CLI::NonNegativeNumber);
    auto* pl_random = solve_cmd->add_flag("--pl-random", solve_o.pl_random,
                                          "Draw the mating reach from [200, 1000) (default)");
    pl_opt->excludes(pl_random);
    solve_cmd->add_option("--seed", solve_o.seed, "RNG seed")->capture_default_str();
    solve_cmd->add_option("--out", solve_o.out, "Result JSON")->required();
    solve_cmd->add_option("--trace", solve_o.trace, "Convergence trace CSV");
    solve_cmd->add_flag("--omit-timing", solve_o.omit_timing, "Write wall_seconds as 0");

    ExactOptions exact;
    auto* exact_cmd = app.add_subcommand("exact", "Exact optimum by enumeration");
    exact_cmd->add_option("--in", exact.in, "Instance JSON")->required();
    exact_cmd->add_option("--budget", exact.budget, "Maximum N^R to enumerate")->capture_default_str();
    exact_cmd->add_option("--out", exact.out, "Result JSON")->required();
    exact_cmd->add_option("--threads", exact.threads, "Worker threads")->check(CLI::PositiveNumber);

    ValidateOptions validate;
    auto* validate_cmd = app.add_subcommand("validate", "Cross-check the closed form against the cycle replay");
    validate_cmd->add_option("--trials", validate.trials, "Random trials")->capture_default_str();
    validate_cmd->add_option("--seed", validate.seed, "RNG seed")->capture_default_str();

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark grid");
    bench_cmd->add_option("--grid", bench.grid, "'default' or a JSON case list")->capture_default_str();
    bench_cmd->add_option("--algos", bench.algos, "Comma-separated algorithms")->capture_default_str();
    bench_cmd->add_option("--reps", bench.reps, "Repetitions per case")->capture_default_str()->check(
        CLI::PositiveNumber);
    bench_cmd->add_option("--products", bench.products, "Products D")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
    bench_cmd->add_option("--pop-size", bench.pop_size, "Population size Q")->capture_default_str();
    bench_cmd->add_option("--generations", bench.generations, "Generations G")->capture_default_str();
    bench_cmd->add_option("--budget", bench.budget, "Enumeration budget for exact references")
        ->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "Output directory")->required();
    bench_cmd->add_option("--threads", bench.threads, "Worker threads")->check(CLI::PositiveNumber);
    bench_cmd->add_flag("--omit-timing", bench.omit_timing, "Report execution times as 0");

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("pl-sweep", "Mean completion time per mating reach");
    sweep_cmd->add_option("--stages", sweep.stages, "Stages N")->capture_default_str();
    sweep_cmd->add_option("--workers", sweep.workers, "Workers R")->capture_default_str();
    sweep_cmd->add_option("--products", sweep.products, "Products D")->capture_default_str();
    sweep_cmd->add_option("--pl-list", sweep.pl_list, "Comma-separated reach values")->capture_default_str();
    sweep_cmd->add_option("--reps", sweep.reps, "Instances per value")->capture_default_str()->check(
        CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", sweep.seed, "Master seed")->capture_default_str();
    sweep_cmd->add_option("--pop-size", sweep.pop_size, "Population size Q")->capture_default_str();
    sweep_cmd->add_option("--generations", sweep.generations, "Generations G")->capture_default_str();
    sweep_cmd->add_option("--out", sweep.out, "Output directory")->required();
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads")->check(CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        if (*gen_cmd) return cmd_gen(gen, out, err);
        if (*solve_cmd) return cmd_solve(solve_o, out, err);
        if (*exact_cmd) return cmd_exact(exact, out, err);
        if (*validate_cmd) return cmd_validate(validate, out, err);
        if (*bench_cmd) return cmd_bench(bench, out, err);
        if (*sweep_cmd) return cmd_pl_sweep(sweep, out, err);
    } catch (const std::logic_error& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace fsmsp::cli
