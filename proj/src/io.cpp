#include "rostering/io.hpp"

#include <fstream>
#include <sstream>

namespace rostering {

using nlohmann::json;

json instance_to_json(const Instance& inst) {
    json doc;
    doc["format_version"] = kInstanceFormatVersion;
    json patterns = json::array();
    for (const ShiftPattern& p : inst.patterns()) {
        patterns.push_back({{"id", p.id}, {"cover", p.cover_string()}});
    }
    doc["patterns"] = std::move(patterns);
    json nurses = json::array();
    for (const Nurse& nu : inst.nurses()) {
        json feasible = json::array();
        json costs = json::array();
        for (std::size_t t = 0; t < nu.feasible.size(); ++t) {
            feasible.push_back(inst.pattern(nu.feasible[t]).id);
            costs.push_back(nu.cost[t]);
        }
        nurses.push_back({{"id", nu.id}, {"grade", nu.grade}, {"feasible", std::move(feasible)}, {"costs", std::move(costs)}});
    }
    doc["nurses"] = std::move(nurses);
    json demand = json::array();
    for (int k = 0; k < kShiftCount; ++k) {
        demand.push_back({inst.demand()[k][0], inst.demand()[k][1], inst.demand()[k][2]});
    }
    doc["demand"] = std::move(demand);
    return doc;
}

Instance instance_from_json(const json& doc) {
    if (!doc.contains("format_version") || doc.at("format_version").get<int>() != kInstanceFormatVersion) {
        throw std::invalid_argument("unsupported instance format_version");
    }
    RawInstance raw;
    for (const json& p : doc.at("patterns")) {
        raw.patterns.push_back(
            ShiftPattern::from_cover_string(p.at("id").get<int>(), p.at("cover").get<std::string>()));
    }
    for (const json& entry : doc.at("nurses")) {
        Nurse nu;
        nu.id = entry.at("id").get<int>();
        nu.grade = entry.at("grade").get<int>();
        nu.feasible = entry.at("feasible").get<std::vector<int>>();
        nu.cost = entry.at("costs").get<std::vector<int>>();
        raw.nurses.push_back(std::move(nu));
    }
    const json& demand = doc.at("demand");
    if (demand.size() != kShiftCount) throw std::invalid_argument("demand must have 14 rows");
    for (int k = 0; k < kShiftCount; ++k) {
        const json& row = demand.at(k);
        if (row.size() != kGradeCount) throw std::invalid_argument("demand rows must have 3 entries");
        for (int s = 0; s < kGradeCount; ++s) raw.demand[k][s] = row.at(s).get<int>();
    }
    return Instance::validate(raw);
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path.string());
    json doc = json::parse(in);
    return instance_from_json(doc);
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
    write_text_file(path, instance_to_json(inst).dump(2) + "\n");
}

json solution_to_json(const Instance& inst, const Individual& ind, const SolverMeta& meta) {
    json doc;
    doc["format_version"] = kSolutionFormatVersion;
    json assignment = json::array();
    for (int i = 0; i < ind.size(); ++i) {
        const ShiftPattern& p = inst.pattern(ind.gene(i));
        assignment.push_back({{"nurse", inst.nurse(i).id},
                              {"grade", inst.nurse(i).grade},
                              {"pattern", p.id},
                              {"cover", p.cover_string()}});
    }
    doc["assignment"] = std::move(assignment);
    doc["raw_cost"] = static_cast<int>(raw_cost(inst, ind));
    const Deficit d = deficit(inst, ind);
    doc["feasible"] = d.total_under == 0;
    json shortfalls = json::array();
    const CoverMatrix cover = cover_counts(inst, ind);
    for (int k = 0; k < kShiftCount; ++k) {
        int cumulative = 0;
        for (int s = 0; s < kGradeCount; ++s) {
            cumulative += cover[k][s];
            const int shortfall = inst.demand()[k][s] - cumulative;
            if (shortfall > 0) {
                shortfalls.push_back({{"shift", k + 1}, {"grade", s + 1}, {"short", shortfall}});
            }
        }
    }
    doc["deficit"] = {{"total", d.total_under}, {"violations", d.violated_constraints}, {"shortfalls", std::move(shortfalls)}};
    doc["solver"] = {{"seed", meta.seed},
                     {"runs", meta.runs},
                     {"feasible_runs", meta.feasible_runs},
                     {"generations", meta.generations},
                     {"config_hash", meta.config_hash}};
    return doc;
}

void verify_solution(const Instance& inst, const json& doc) {
    const json& assignment = doc.at("assignment");
    if (static_cast<int>(assignment.size()) != inst.nurse_count()) {
        throw std::runtime_error("solution: assignment size mismatch");
    }
    // Pattern ids back to positions; nurses matched by external id.
    std::vector<int> genes(inst.nurse_count(), -1);
    for (const json& entry : assignment) {
        const int nurse_id = entry.at("nurse").get<int>();
        const int pattern_id = entry.at("pattern").get<int>();
        int nurse_pos = -1;
        for (int i = 0; i < inst.nurse_count(); ++i) {
            if (inst.nurse(i).id == nurse_id) {
                nurse_pos = i;
                break;
            }
        }
        if (nurse_pos < 0) throw std::runtime_error("solution: unknown nurse id");
        int pattern_pos = -1;
        for (int j = 0; j < inst.pattern_count(); ++j) {
            if (inst.pattern(j).id == pattern_id) {
                pattern_pos = j;
                break;
            }
        }
        if (pattern_pos < 0 || !inst.feasible_for(nurse_pos, pattern_pos)) {
            throw std::runtime_error("solution: assignment violates the nurse's feasible set");
        }
        genes[nurse_pos] = pattern_pos;
    }
    Individual ind(inst, std::move(genes));
    const Deficit d = deficit(inst, ind);
    if (doc.at("raw_cost").get<int>() != static_cast<int>(raw_cost(inst, ind)) ||
        doc.at("feasible").get<bool>() != (d.total_under == 0) ||
        doc.at("deficit").at("total").get<int>() != d.total_under ||
        doc.at("deficit").at("violations").get<int>() != d.violated_constraints) {
        throw std::runtime_error("solution: stated cost/deficit do not match the assignment");
    }
}

json config_to_json(const GAConfig& cfg) {
    return json{{"total_population", cfg.total_population},
                {"crossover_chance", cfg.crossover_chance},
                {"mutation_chance", cfg.mutation_chance},
                {"elite_fraction", cfg.elite_fraction},
                {"stall_limit", cfg.stall_limit},
                {"alpha", cfg.alpha},
                {"floor_v", cfg.floor_v},
                {"incentive_factor", cfg.incentive_factor},
                {"grade_crossover_share", cfg.grade_crossover_share},
                {"migration_interval", cfg.migration_interval},
                {"repair_top_k", cfg.repair_top_k},
                {"runs", cfg.runs},
                {"rng_seed", cfg.rng_seed},
                {"use_subpopulations", cfg.use_subpopulations},
                {"use_incentive", cfg.use_incentive},
                {"use_disincentive", cfg.use_disincentive},
                {"use_repair", cfg.use_repair},
                {"escalate_alpha", cfg.escalate_alpha},
                {"max_generations", cfg.max_generations}};
}

GAConfig config_from_json(const json& doc, GAConfig base) {
    for (const auto& [key, value] : doc.items()) {
        if (key == "total_population") base.total_population = value.get<int>();
        else if (key == "crossover_chance") base.crossover_chance = value.get<double>();
        else if (key == "mutation_chance") base.mutation_chance = value.get<double>();
        else if (key == "elite_fraction") base.elite_fraction = value.get<double>();
        else if (key == "stall_limit") base.stall_limit = value.get<int>();
        else if (key == "alpha") base.alpha = value.get<double>();
        else if (key == "floor_v") base.floor_v = value.get<double>();
        else if (key == "incentive_factor") base.incentive_factor = value.get<double>();
        else if (key == "grade_crossover_share") base.grade_crossover_share = value.get<double>();
        else if (key == "migration_interval") base.migration_interval = value.get<int>();
        else if (key == "repair_top_k") base.repair_top_k = value.get<int>();
        else if (key == "runs") base.runs = value.get<int>();
        else if (key == "rng_seed") base.rng_seed = value.get<std::uint64_t>();
        else if (key == "use_subpopulations") base.use_subpopulations = value.get<bool>();
        else if (key == "use_incentive") base.use_incentive = value.get<bool>();
        else if (key == "use_disincentive") base.use_disincentive = value.get<bool>();
        else if (key == "use_repair") base.use_repair = value.get<bool>();
        else if (key == "escalate_alpha") base.escalate_alpha = value.get<bool>();
        else if (key == "max_generations") base.max_generations = value.get<int>();
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    base.validate();
    return base;
}

GAConfig load_config(const std::filesystem::path& path, GAConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    return config_from_json(json::parse(in), base);
}

std::string config_hash(const GAConfig& cfg) {
    const std::string dump = config_to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

json oracle_to_json(const OracleResult& result) {
    json doc;
    doc["status"] = result.status == OracleStatus::Optimal ? "optimal" : "infeasible";
    doc["nodes_explored"] = result.nodes_explored;
    if (result.status == OracleStatus::Optimal) {
        doc["best_cost"] = result.best_cost;
        doc["best_genes"] = result.best_genes;
    }
    return doc;
}

json bench_row_to_json(const BenchRow& row) {
    json doc{{"instance", row.name},
             {"runs", row.runs},
             {"feasible_runs", row.feasible_runs},
             {"mean_feasible_cost", row.mean_feasible_cost},
             {"mean_seconds", row.mean_seconds},
             {"best_cost", row.best_cost}};
    if (row.has_optimum) {
        doc["optimal_runs"] = row.optimal_runs;
        doc["within3_runs"] = row.within3_runs;
    }
    return doc;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << text;
}

} // namespace rostering
