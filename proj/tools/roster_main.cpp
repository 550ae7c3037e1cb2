#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rostering/engine.hpp"
#include "rostering/instgen.hpp"
#include "rostering/io.hpp"
#include "rostering/oracle.hpp"

namespace fs = std::filesystem;
using namespace rostering;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNoFeasible = 2;
constexpr int kExitBudget = 3;

GAConfig resolve_config(const std::string& config_path, std::optional<std::uint64_t> seed,
                        std::optional<int> runs) {
    GAConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path, cfg);
    if (seed) cfg.rng_seed = *seed;
    if (runs) cfg.runs = *runs;
    cfg.validate();
    return cfg;
}

int cmd_solve(const std::string& instance_path, const std::string& config_path,
              std::optional<std::uint64_t> seed, std::optional<int> runs, std::string out_path,
              bool escalate, bool quiet) {
    Instance inst = load_instance(instance_path);
    GAConfig cfg = resolve_config(config_path, seed, runs);
    cfg.escalate_alpha = escalate || cfg.escalate_alpha;

    MultiStartResult result = multi_start(inst, cfg);
    if (!quiet) {
        for (std::size_t r = 0; r < result.runs.size(); ++r) {
            const RunResult& res = result.runs[r];
            std::cout << "run " << r + 1 << "/" << cfg.runs << " generations=" << res.generations;
            if (res.feasible) {
                std::cout << " feasible cost=" << res.best_raw_cost;
            } else {
                std::cout << " infeasible penalized=" << res.best_penalized;
            }
            std::cout << " time=" << res.wall_seconds << "s\n";
        }
    }

    SolverMeta meta;
    meta.seed = cfg.rng_seed;
    meta.runs = cfg.runs;
    meta.feasible_runs = result.feasible_runs;
    meta.generations = result.best.generations;
    meta.config_hash = config_hash(cfg);
    if (out_path.empty()) {
        out_path = fs::path(instance_path).replace_extension(".solution.json").string();
    }
    write_text_file(out_path, solution_to_json(inst, result.best.best, meta).dump(2) + "\n");
    if (!quiet) {
        std::cout << (result.feasible_runs > 0 ? "feasible" : "no feasible solution found") << ", best ";
        if (result.best.feasible) {
            std::cout << "cost " << result.best.best_raw_cost;
        } else {
            std::cout << "penalized " << result.best.best_penalized;
        }
        std::cout << ", solution written to " << out_path << "\n";
    }
    return result.feasible_runs > 0 ? kExitOk : kExitNoFeasible;
}

int cmd_generate(int nurses, double tightness, const std::string& cost_mode, std::uint64_t seed,
                 const std::string& out_path, bool quiet) {
    GenSpec spec;
    if (nurses > 0) {
        spec.nurses_min = spec.nurses_max = nurses;
    }
    spec.demand_tightness = tightness;
    spec.seed = seed;
    if (cost_mode == "uniform") {
        spec.cost_mode = CostMode::UniformRandom;
    } else if (cost_mode != "biased") {
        throw std::invalid_argument("--cost-mode must be 'biased' or 'uniform'");
    }
    Instance inst = generate(spec);
    save_instance(inst, out_path);
    if (!quiet) {
        std::cout << "wrote " << out_path << " (" << inst.nurse_count() << " nurses, "
                  << inst.pattern_count() << " patterns)\n";
    }
    return kExitOk;
}

int cmd_oracle(const std::string& instance_path, long budget, const std::string& out_path, bool quiet) {
    Instance inst = load_instance(instance_path);
    OracleResult result;
    try {
        result = exact_solve(inst, budget);
    } catch (const BudgetExceeded& e) {
        std::cout << "BudgetExceeded: " << e.what() << "\n";
        return kExitBudget;
    }
    if (result.status == OracleStatus::Optimal) {
        std::cout << "Optimal cost=" << result.best_cost << " nodes=" << result.nodes_explored << "\n";
    } else {
        std::cout << "Infeasible nodes=" << result.nodes_explored << "\n";
    }
    if (!out_path.empty()) {
        write_text_file(out_path, oracle_to_json(result).dump(2) + "\n");
        if (!quiet) std::cout << "oracle result written to " << out_path << "\n";
    }
    return kExitOk;
}

bool is_instance_file(const fs::path& path) {
    if (path.extension() != ".json") return false;
    const std::string stem = path.stem().string();
    return !stem.ends_with(".oracle") && !stem.ends_with(".solution") && !stem.ends_with(".config");
}

int cmd_bench(const std::string& dir, std::optional<int> runs, const std::string& toggle,
              std::optional<std::uint64_t> seed, const std::string& config_path,
              const std::string& out_path, int jobs, bool quiet) {
    GAConfig cfg = resolve_config(config_path, seed, runs);
    const auto features = feature_set_from_name(toggle);
    if (!features) throw std::invalid_argument("unknown --toggle '" + toggle + "'");
    cfg = GAConfig::with_features(*features, cfg);

    std::vector<BenchInstance> instances;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_instance_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        BenchInstance bi;
        bi.name = file.stem().string();
        bi.inst = load_instance(file);
        fs::path oracle_file = file;
        oracle_file.replace_extension(".oracle.json");
        if (fs::exists(oracle_file)) {
            std::ifstream in(oracle_file);
            const auto doc = nlohmann::json::parse(in);
            if (doc.at("status").get<std::string>() == "optimal") {
                bi.optimum = doc.at("best_cost").get<int>();
            }
        }
        instances.push_back(std::move(bi));
    }
    if (instances.empty()) throw std::runtime_error("no instance files found in " + dir);

    BenchSummary summary = bench(instances, cfg, jobs);

    if (!quiet) {
        std::cout << "toggle=" << toggle << " runs/instance=" << cfg.runs << "\n";
        std::cout << "instance              feas%   mean-cost  optimal  within3  mean-s\n";
    }
    std::string jsonl;
    for (const BenchRow& row : summary.rows) {
        if (!quiet) {
            std::printf("%-20s  %5.1f  %9.2f  %7s  %7s  %6.2f\n", row.name.c_str(),
                        100.0 * row.feasible_runs / row.runs,
                        row.feasible_runs > 0 ? row.mean_feasible_cost : 0.0,
                        row.has_optimum ? std::to_string(row.optimal_runs).c_str() : "-",
                        row.has_optimum ? std::to_string(row.within3_runs).c_str() : "-",
                        row.mean_seconds);
        }
        jsonl += bench_row_to_json(row).dump() + "\n";
    }
    if (!quiet) {
        std::cout << "total: " << summary.total_feasible_runs << "/" << summary.total_runs
                  << " feasible runs, " << summary.instances_with_feasible << "/"
                  << summary.rows.size() << " instances with a feasible run, mean feasible cost "
                  << summary.mean_feasible_cost << "\n";
    }
    if (!out_path.empty()) write_text_file(out_path, jsonl);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weekly nurse rostering: co-evolutionary GA solver, exact oracle, instance generator"};
    app.require_subcommand(1);

    std::string instance_path, config_path, out_path, cost_mode = "biased", toggle = "full", dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::uint64_t gen_seed = 1;
    int nurses = 0;
    double tightness = 0.9;
    long budget = 50'000'000;
    int jobs = 0;
    bool quiet = false, escalate = false;

    CLI::App* solve = app.add_subcommand("solve", "solve an instance with seeded multi-starts");
    solve->add_option("instance", instance_path, "instance file")->required();
    solve->add_option("--config", config_path, "GA config JSON");
    solve->add_option("--seed", seed, "base RNG seed");
    solve->add_option("--runs", runs, "number of multi-starts");
    solve->add_option("--out", out_path, "solution file path");
    solve->add_flag("--escalate-alpha", escalate, "double alpha after failed batches of 5 runs");
    solve->add_flag("--quiet", quiet, "suppress per-run output");

    CLI::App* generate = app.add_subcommand("generate", "generate a synthetic ward instance");
    generate->add_option("--nurses", nurses, "nurse count (default: sampled in 20..30)");
    generate->add_option("--tightness", tightness, "demand tightness in (0, 1.2]");
    generate->add_option("--cost-mode", cost_mode, "biased|uniform");
    generate->add_option("--seed", gen_seed, "generator seed");
    generate->add_option("--out", out_path, "output instance file")->required();
    generate->add_flag("--quiet", quiet, "suppress output");

    CLI::App* oracle = app.add_subcommand("oracle", "solve exactly by pruned exhaustive search");
    oracle->add_option("instance", instance_path, "instance file")->required();
    oracle->add_option("--budget", budget, "node budget");
    oracle->add_option("--out", out_path, "write oracle result JSON");
    oracle->add_flag("--quiet", quiet, "suppress extra output");

    CLI::App* bench_cmd = app.add_subcommand("bench", "run the multi-start protocol over a directory");
    bench_cmd->add_option("dir", dir, "directory of instance files")->required();
    bench_cmd->add_option("--runs", runs, "runs per instance");
    bench_cmd->add_option("--toggle", toggle, "canonical|coevo|incentive|repair|disincentive|full");
    bench_cmd->add_option("--seed", seed, "base RNG seed");
    bench_cmd->add_option("--config", config_path, "GA config JSON");
    bench_cmd->add_option("--out", out_path, "machine-readable JSONL output path");
    bench_cmd->add_option("--jobs", jobs, "worker threads (default: hardware)");
    bench_cmd->add_flag("--quiet", quiet, "suppress table output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(instance_path, config_path, seed, runs, out_path, escalate, quiet);
        if (generate->parsed()) return cmd_generate(nurses, tightness, cost_mode, gen_seed, out_path, quiet);
        if (oracle->parsed()) return cmd_oracle(instance_path, budget, out_path, quiet);
        if (bench_cmd->parsed()) return cmd_bench(dir, runs, toggle, seed, config_path, out_path, jobs, quiet);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
