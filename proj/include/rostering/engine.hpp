#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rostering/fitness.hpp"
#include "rostering/model.hpp"
#include "rostering/operators.hpp"
#include "rostering/rng.hpp"

namespace rostering {

// Which of the problem-specific features are active. The named sets mirror
// the ablation columns used in benchmarking: a canonical single-population
// GA, the plain 8-population co-evolution, and co-evolution plus balance
// incentives, repair, and disincentives in the usual combinations.
enum class FeatureSet { Canonical, Coevolution, IncentiveOnly, IncentiveRepair, DisincentiveOnly, Full };

struct GAConfig {
    int total_population = 1000;
    double crossover_chance = 0.75; // per mated pair
    double mutation_chance = 0.02;  // per child, one single-nurse mutation
    double elite_fraction = 0.10;
    int stall_limit = 30; // generations without improvement
    double alpha = 8.0;   // penalty severity
    double floor_v = 5.0; // penalty weight once feasible
    double incentive_factor = 3.0;
    double grade_crossover_share = 0.5;
    int migration_interval = 5; // generations; 0 disables
    int repair_top_k = 5;
    int runs = 20;
    std::uint64_t rng_seed = 1;

    bool use_subpopulations = true;
    bool use_incentive = true;
    bool use_disincentive = true;
    bool use_repair = true;
    // Doubles alpha after every batch of 5 runs of a multi-start that found
    // no feasible solution. Off by default.
    bool escalate_alpha = false;
    int max_generations = 100000; // safety stop

    void validate() const; // throws std::invalid_argument

    static GAConfig with_features(FeatureSet set);
    static GAConfig with_features(FeatureSet set, GAConfig base);
};

std::string feature_set_name(FeatureSet set);
std::optional<FeatureSet> feature_set_from_name(const std::string& name);

// One species of the co-evolution. Populations 1-7 are scored by the
// grade-scoped sub-fitness of their scope; the main population (id 8) by
// the full penalized fitness plus balance incentives. Each owns its
// adaptive penalty state.
struct SubPopulation {
    int id = 8;
    GradeScope scope = GradeScope::all();
    bool cumulative = true;
    int capacity = 0;
    PenaltyState penalty;
    std::vector<Individual> members;
};

// Instrumentation for tests and ablation checks; pass nullptr to skip.
struct StepTrace {
    struct GradeChildEvent {
        int pop_id = 0;
        GradeCutPlan plan{};
        std::array<int, kGradeCount> donor_pop{}; // pop id supplying each block
        std::array<std::vector<int>, kGradeCount> parent_genes;
        std::vector<int> child_genes;
    };
    int uniform_children = 0;
    int clone_children = 0;
    int grade_children = 0;
    int mutations = 0;
    int repairs = 0;
    int incentive_bonuses = 0;
    int incentive_maluses = 0;
    std::vector<GradeChildEvent> grade_events;
};

std::vector<SubPopulation> init_populations(const Instance& inst, const GAConfig& cfg, Rng& rng);

void step_generation(std::vector<SubPopulation>& pops, const Instance& inst, const GAConfig& cfg,
                     Rng& rng, StepTrace* trace = nullptr);

// Random migration: one uniformly chosen individual from each population is
// copied into a uniformly chosen other population, displacing its worst
// member. Population sizes are preserved.
void migrate(std::vector<SubPopulation>& pops, const Instance& inst, const GAConfig& cfg, Rng& rng);

struct RunResult {
    Individual best;
    bool feasible = false;
    int best_raw_cost = -1;        // defined when feasible
    double best_penalized = 0.0;   // penalized fitness of best (equals raw cost when feasible)
    int generations = 0;
    double wall_seconds = 0.0;
    std::vector<double> best_score_trace; // main population best per generation

    // Equality ignores wall_seconds; everything else is deterministic per seed.
    bool operator==(const RunResult& other) const {
        return best == other.best && feasible == other.feasible &&
               best_raw_cost == other.best_raw_cost && best_penalized == other.best_penalized &&
               generations == other.generations && best_score_trace == other.best_score_trace;
    }
};

RunResult run(const Instance& inst, const GAConfig& cfg, std::uint64_t seed);

struct MultiStartResult {
    RunResult best; // feasible-first, then raw cost, then penalized fitness
    int feasible_runs = 0;
    double final_alpha = 0.0;
    std::vector<RunResult> runs;
};

MultiStartResult multi_start(const Instance& inst, const GAConfig& cfg);

struct BenchInstance {
    std::string name;
    Instance inst;
    std::optional<int> optimum; // oracle best cost, when known
};

struct BenchRow {
    std::string name;
    int runs = 0;
    int feasible_runs = 0;
    int optimal_runs = 0; // meaningful when has_optimum
    int within3_runs = 0; // feasible and raw cost within 3 of the optimum
    bool has_optimum = false;
    double mean_feasible_cost = 0.0; // over feasible run bests; 0 when none
    double mean_seconds = 0.0;
    int best_cost = -1; // best feasible raw cost over all runs; -1 when none
};

struct BenchSummary {
    std::vector<BenchRow> rows;
    int total_runs = 0;
    int total_feasible_runs = 0;
    int instances_with_feasible = 0;
    int instances_all_infeasible = 0;
    double mean_feasible_cost = 0.0; // mean over rows with any feasible run
};

// Runs `cfg.runs` seeded multi-starts per instance, in parallel over
// (instance, run) jobs; results are deterministic regardless of thread
// count. Rows come back sorted by instance name.
BenchSummary bench(const std::vector<BenchInstance>& instances, const GAConfig& cfg, int jobs = 0);

} // namespace rostering
