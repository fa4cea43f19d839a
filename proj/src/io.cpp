#include "fsmsp/io.hpp"

#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace fsmsp {

using nlohmann::json;

json to_json(const Instance& instance) {
    json doc;
    doc["num_stages"] = instance.num_stages();
    doc["num_workers"] = instance.num_workers();
    doc["num_products"] = instance.num_products();
    doc["unit_times"] = instance.unit_times();
    doc["proficiency"] = instance.proficiency_matrix();
    return doc;
}

Instance instance_from_json(const json& doc) {
    try {
        return Instance(doc.at("num_stages").get<int>(), doc.at("num_workers").get<int>(),
                        doc.at("num_products").get<int>(), doc.at("unit_times").get<std::vector<double>>(),
                        doc.at("proficiency").get<std::vector<std::vector<double>>>());
    } catch (const json::exception& e) {
        throw IoError(fmt::format("instance document: {}", e.what()));
    }
}

json to_json(const Assignment& a) { return a.stage_of; }

Assignment assignment_from_json(const json& doc) {
    try {
        return Assignment{doc.get<std::vector<int>>()};
    } catch (const json::exception& e) {
        throw IoError(fmt::format("assignment document: {}", e.what()));
    }
}

json to_json(const ExactResult& result) {
    json doc;
    doc["optimum_T"] = result.optimum_T;
    doc["optimizer"] = to_json(result.optimizer);
    doc["states_enumerated"] = result.states_enumerated;
    return doc;
}

json to_json(const Instance& instance, const RunResult& result, const ResultMetadata& meta) {
    json doc;
    doc["algorithm"] = meta.algorithm;
    doc["seed"] = meta.seed;
    doc["assignment"] = to_json(result.best.assignment);
    doc["schedule"] = decode(instance, result.best.assignment);
    doc["completion_time"] = result.best.completion_time;
    doc["wall_seconds"] = meta.record_timing ? result.wall_seconds : 0.0;
    doc["generations_run"] = result.generations_run;
    doc["pl"] = result.pl;
    doc["collapse_generation"] = result.collapse_generation ? json(*result.collapse_generation) : json(nullptr);
    return doc;
}

void write_trace_csv(std::ostream& out, const RunResult& result) {
    out << "generation,best_T\n";
    for (std::size_t g = 0; g < result.trace.size(); ++g) {
        out << (g + 1) << ',' << format_real(result.trace[g]) << '\n';
    }
}

std::string dump_canonical(const json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
    out << text;
    if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open {} for reading", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Instance load_instance(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(fmt::format("{}: {}", path.string(), e.what()));
    }
    try {
        return instance_from_json(doc);
    } catch (const Error& e) {
        throw IoError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void save_instance(const std::filesystem::path& path, const Instance& instance) {
    write_text_file(path, dump_canonical(to_json(instance)));
}

std::string format_real(double value) { return fmt::format("{}", value); }

}  // namespace fsmsp
