#pragma once

// JSON and CSV surfaces: instance files, assignments, exact results, solver
// results and convergence traces.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "fsmsp/model.hpp"
#include "fsmsp/oracles.hpp"
#include "fsmsp/sbmo.hpp"

namespace fsmsp {

/// Unreadable file or a document that does not match the expected schema.
class IoError : public Error {
public:
    using Error::Error;
};

nlohmann::json to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const Assignment& a);
Assignment assignment_from_json(const nlohmann::json& doc);

/// {"optimum_T", "optimizer", "states_enumerated"}
nlohmann::json to_json(const ExactResult& result);

struct ResultMetadata {
    std::string algorithm;
    std::uint64_t seed = 0;
    bool record_timing = true;  ///< false writes wall_seconds as 0 for byte-stable output
};
nlohmann::json to_json(const Instance& instance, const RunResult& result, const ResultMetadata& meta);

/// `generation,best_T` with one row per generation.
void write_trace_csv(std::ostream& out, const RunResult& result);

/// Canonical text form: two-space indented JSON followed by a newline.
std::string dump_canonical(const nlohmann::json& doc);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const Instance& instance);

/// Shortest round-trip-safe decimal for CSV cells.
std::string format_real(double value);

}  // namespace fsmsp
