#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rostering/engine.hpp"
#include "rostering/model.hpp"
#include "rostering/oracle.hpp"

namespace rostering {

inline constexpr int kInstanceFormatVersion = 1;
inline constexpr int kSolutionFormatVersion = 1;

// Instance files carry patterns (14-char 0/1 cover strings), nurses with
// their feasible pattern ids and aligned costs, and the 14x3 cumulative
// demand matrix. Parsing validates everything; serialization round-trips
// losslessly.
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& doc);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

struct SolverMeta {
    std::uint64_t seed = 0;
    int runs = 0;
    int feasible_runs = 0;
    int generations = 0;
    std::string config_hash;
};

nlohmann::json solution_to_json(const Instance& inst, const Individual& ind, const SolverMeta& meta);
// Replays the stated assignment through the model; throws std::runtime_error
// if the recomputed cost, deficit, or feasibility flag disagree.
void verify_solution(const Instance& inst, const nlohmann::json& doc);

nlohmann::json config_to_json(const GAConfig& cfg);
GAConfig config_from_json(const nlohmann::json& doc, GAConfig base = {});
GAConfig load_config(const std::filesystem::path& path, GAConfig base = {});
std::string config_hash(const GAConfig& cfg);

nlohmann::json oracle_to_json(const OracleResult& result);

nlohmann::json bench_row_to_json(const BenchRow& row);

void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace rostering
