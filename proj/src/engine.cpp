#include "rostering/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace rostering {

void GAConfig::validate() const {
    auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!probability(crossover_chance) || !probability(mutation_chance) ||
        !probability(elite_fraction) || !probability(grade_crossover_share)) {
        throw std::invalid_argument("config: probabilities must lie in [0,1]");
    }
    if (total_population < (use_subpopulations ? 10 : 1)) {
        throw std::invalid_argument("config: total_population too small");
    }
    if (alpha <= 0.0 || floor_v <= 0.0) throw std::invalid_argument("config: alpha and floor_v must be positive");
    if (incentive_factor < 0.0) throw std::invalid_argument("config: incentive_factor must be non-negative");
    if (stall_limit < 1 || max_generations < 1) throw std::invalid_argument("config: generation limits must be positive");
    if (repair_top_k < 0 || migration_interval < 0) throw std::invalid_argument("config: counts must be non-negative");
    if (runs < 1) throw std::invalid_argument("config: runs must be positive");
    const int small = use_subpopulations ? total_population / 10 : total_population;
    const int main_size = use_subpopulations ? total_population - 7 * small : total_population;
    for (int size : {small, main_size}) {
        if (static_cast<int>(elite_fraction * size) < 1) {
            throw std::invalid_argument("config: elite_fraction x population size must be at least 1");
        }
    }
}

GAConfig GAConfig::with_features(FeatureSet set) { return with_features(set, GAConfig{}); }

GAConfig GAConfig::with_features(FeatureSet set, GAConfig base) {
    base.use_subpopulations = set != FeatureSet::Canonical;
    base.use_incentive = set == FeatureSet::IncentiveOnly || set == FeatureSet::IncentiveRepair || set == FeatureSet::Full;
    base.use_disincentive = set == FeatureSet::DisincentiveOnly || set == FeatureSet::Full;
    base.use_repair = set == FeatureSet::IncentiveRepair || set == FeatureSet::Full;
    return base;
}

std::string feature_set_name(FeatureSet set) {
    switch (set) {
    case FeatureSet::Canonical: return "canonical";
    case FeatureSet::Coevolution: return "coevo";
    case FeatureSet::IncentiveOnly: return "incentive";
    case FeatureSet::IncentiveRepair: return "repair";
    case FeatureSet::DisincentiveOnly: return "disincentive";
    case FeatureSet::Full: return "full";
    }
    return "full";
}

std::optional<FeatureSet> feature_set_from_name(const std::string& name) {
    for (FeatureSet set : {FeatureSet::Canonical, FeatureSet::Coevolution, FeatureSet::IncentiveOnly,
                           FeatureSet::IncentiveRepair, FeatureSet::DisincentiveOnly, FeatureSet::Full}) {
        if (feature_set_name(set) == name) return set;
    }
    return std::nullopt;
}

namespace {

double score_in(const Instance& inst, const SubPopulation& pop, const Individual& ind,
                const GAConfig& cfg, StepTrace* trace = nullptr) {
    if (!pop.cumulative) {
        return sub_fitness(inst, ind, pop.scope, pop.penalty.weight);
    }
    double fitness = penalized_fitness(inst, ind, pop.penalty.weight);
    if (cfg.use_incentive || cfg.use_disincentive) {
        const BalanceClass cls = classify_balance(inst, ind);
        if (cls == BalanceClass::Balanced && cfg.use_incentive) {
            fitness -= cfg.incentive_factor * pop.penalty.weight;
            if (trace) ++trace->incentive_bonuses;
        } else if (cls == BalanceClass::Unbalanced && cfg.use_disincentive) {
            fitness += cfg.incentive_factor * pop.penalty.weight;
            if (trace) ++trace->incentive_maluses;
        }
    }
    return fitness;
}

int elite_count(const GAConfig& cfg, int capacity) {
    return std::max(1, static_cast<int>(cfg.elite_fraction * capacity));
}

// Grade-based child composition per receiving population: which population
// donates each grade block. Populations 4-6 cover only two grades; the
// remaining block comes from a rank-selected member of the receiver itself
// (slot -1). Population 8 combines any set of lower populations whose
// scopes tile the grades.
struct BlockSources {
    std::array<int, kGradeCount> donor_pop; // pop id, or -1 for the receiver
};

BlockSources sources_for(int pop_id, Rng& rng) {
    switch (pop_id) {
    case 4: return {{1, 2, -1}};
    case 5: return {{1, -1, 3}};
    case 6: return {{-1, 2, 3}};
    case 7: return {{1, 2, 3}};
    default: break;
    }
    // Main population: one of the five tilings of {1,2,3} by sub-population
    // scopes, chosen uniformly.
    static constexpr std::array<std::array<int, kGradeCount>, 5> kTilings = {{
        {1, 2, 3},
        {4, 4, 3},
        {5, 2, 5},
        {6, 6, 1},
        {7, 7, 7},
    }};
    return {kTilings[rng.uniform_int(static_cast<int>(kTilings.size()))]};
}

struct GenerationWorkspace {
    std::vector<std::vector<double>> scores;      // per pop, per member
    std::vector<RankSampler> own;                 // per pop
    std::vector<std::vector<RankSampler>> donors; // donors[p][d]: pop d's members under pop p's scoring
};

void score_population(const Instance& inst, SubPopulation& pop, const GAConfig& cfg,
                      std::vector<double>& out, StepTrace* trace) {
    out.resize(pop.members.size());
    for (std::size_t i = 0; i < pop.members.size(); ++i) {
        out[i] = score_in(inst, pop, pop.members[i], cfg, trace);
        pop.members[i].set_score(out[i]);
    }
}

} // namespace

std::vector<SubPopulation> init_populations(const Instance& inst, const GAConfig& cfg, Rng& rng) {
    std::vector<SubPopulation> pops;
    if (cfg.use_subpopulations) {
        const int small = cfg.total_population / 10;
        const int main_size = cfg.total_population - 7 * small;
        const std::array<GradeScope, 7> scopes = {
            GradeScope::of_grade(1),     GradeScope::of_grade(2),     GradeScope::of_grade(3),
            GradeScope::of_grades(1, 2), GradeScope::of_grades(1, 3), GradeScope::of_grades(2, 3),
            GradeScope::all(),
        };
        for (int p = 0; p < 7; ++p) {
            pops.push_back(SubPopulation{p + 1, scopes[p], false, small, {}, {}});
        }
        pops.push_back(SubPopulation{8, GradeScope::all(), true, main_size, {}, {}});
    } else {
        pops.push_back(SubPopulation{8, GradeScope::all(), true, cfg.total_population, {}, {}});
    }

    for (SubPopulation& pop : pops) {
        pop.penalty.alpha = cfg.alpha;
        pop.penalty.floor_v = cfg.floor_v;
        pop.penalty.weight = 10.0; // initial demand weight, replaced below
        pop.members.reserve(pop.capacity);
        for (int i = 0; i < pop.capacity; ++i) {
            pop.members.push_back(Individual::random(inst, rng));
        }
        // Seed the adaptive weight from the generation-0 best.
        int best = 0;
        double best_score = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pop.members.size(); ++i) {
            const double s = score_in(inst, pop, pop.members[i], cfg);
            pop.members[i].set_score(s);
            if (s < best_score) {
                best_score = s;
                best = static_cast<int>(i);
            }
        }
        const int q = pop.cumulative ? deficit(inst, pop.members[best]).violated_constraints
                                     : split_violations(inst, pop.members[best], pop.scope);
        pop.penalty = update_penalty(pop.penalty, q);
    }
    return pops;
}

void step_generation(std::vector<SubPopulation>& pops, const Instance& inst, const GAConfig& cfg,
                     Rng& rng, StepTrace* trace) {
    const int pop_count = static_cast<int>(pops.size());
    GenerationWorkspace ws;
    ws.scores.resize(pop_count);
    ws.own.resize(pop_count);
    ws.donors.resize(pop_count);

    for (int p = 0; p < pop_count; ++p) {
        score_population(inst, pops[p], cfg, ws.scores[p], trace);
        ws.own[p] = RankSampler(ws.scores[p]);
    }

    // Donor samplers rank a source population under the receiving
    // population's own scoring, so co-operating parents are picked for what
    // they contribute to the receiver.
    auto donor_sampler = [&](int receiver, int donor_pop_id) {
        auto& slot = ws.donors[receiver];
        if (slot.empty()) slot.resize(pop_count);
        const int d = donor_pop_id - 1;
        std::vector<double> scores(pops[d].members.size());
        for (std::size_t i = 0; i < scores.size(); ++i) {
            scores[i] = score_in(inst, pops[receiver], pops[d].members[i], cfg);
        }
        slot[d] = RankSampler(scores);
        return &slot[d];
    };
    if (cfg.use_subpopulations) {
        for (int p = 3; p < pop_count; ++p) {
            const int id = pops[p].id;
            if (id >= 4 && id <= 7) {
                for (int g = 1; g <= kGradeCount; ++g) {
                    const int src = sources_for(id, rng).donor_pop[g - 1]; // fixed table, no rng use
                    if (src > 0) donor_sampler(p, src);
                }
            } else {
                for (int d = 1; d <= 7; ++d) donor_sampler(p, d);
            }
        }
    }

    for (int p = 0; p < pop_count; ++p) {
        SubPopulation& pop = pops[p];
        const int elites = elite_count(cfg, pop.capacity);
        const int needed = pop.capacity - elites;
        const bool grade_route = cfg.use_subpopulations && pop.id >= 4;
        const int grade_target = grade_route ? static_cast<int>(std::lround(cfg.grade_crossover_share * needed)) : 0;
        const int uniform_target = needed - grade_target;

        std::vector<Individual> children;
        children.reserve(needed);

        auto maybe_mutate = [&](Individual& child) {
            if (rng.bernoulli(cfg.mutation_chance)) {
                mutate(inst, child, rng);
                if (trace) ++trace->mutations;
            }
        };

        while (static_cast<int>(children.size()) < uniform_target) {
            const Individual& a = pop.members[ws.own[p].draw(rng)];
            const Individual& b = pop.members[ws.own[p].draw(rng)];
            Individual c1, c2;
            if (rng.bernoulli(cfg.crossover_chance)) {
                const CrossoverMask mask = random_mask(inst.nurse_count(), rng);
                c1 = uniform_crossover(inst, a, b, mask);
                c2 = uniform_crossover(inst, b, a, mask); // complementary sibling
                if (trace) trace->uniform_children += 2;
            } else {
                c1 = a;
                c2 = b;
                if (trace) trace->clone_children += 2;
            }
            maybe_mutate(c1);
            children.push_back(std::move(c1));
            if (static_cast<int>(children.size()) < uniform_target) {
                maybe_mutate(c2);
                children.push_back(std::move(c2));
            }
        }

        while (static_cast<int>(children.size()) < needed) {
            const BlockSources sources = sources_for(pop.id, rng);
            std::array<const Individual*, kGradeCount> parents{};
            GradeCutPlan plan{};
            std::array<int, kGradeCount> chosen_pop{};
            for (int g = 1; g <= kGradeCount; ++g) {
                // A two-grade receiver fills its off-scope block from itself.
                const int src = sources.donor_pop[g - 1];
                int slot = -1;
                for (int t = 0; t < g - 1; ++t) {
                    if (sources.donor_pop[t] == src) slot = plan[t];
                }
                if (slot < 0) {
                    slot = g - 1;
                    if (src < 0) {
                        parents[slot] = &pop.members[ws.own[p].draw(rng)];
                    } else {
                        parents[slot] = &pops[src - 1].members[ws.donors[p][src - 1].draw(rng)];
                    }
                }
                plan[g - 1] = slot;
                chosen_pop[g - 1] = src < 0 ? pop.id : src;
            }
            Individual child = grade_crossover(inst, parents, plan);
            if (trace) {
                ++trace->grade_children;
                StepTrace::GradeChildEvent event;
                event.pop_id = pop.id;
                event.plan = plan;
                event.donor_pop = chosen_pop;
                for (int g = 0; g < kGradeCount; ++g) {
                    const auto genes = parents[plan[g]]->genes();
                    event.parent_genes[g].assign(genes.begin(), genes.end());
                }
                event.child_genes.assign(child.genes().begin(), child.genes().end());
                trace->grade_events.push_back(std::move(event));
            }
            maybe_mutate(child);
            children.push_back(std::move(child));
        }

        // Elitist replacement: the best elite_fraction of the old population
        // survives, children fill the rest.
        std::vector<int> order(pop.members.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return ws.scores[p][a] < ws.scores[p][b]; });
        std::vector<Individual> next;
        next.reserve(pop.capacity);
        for (int t = 0; t < elites; ++t) next.push_back(pop.members[order[t]]);
        for (Individual& child : children) next.push_back(std::move(child));
        pop.members = std::move(next);
    }

    // Repair pass: hill-climb the best balanced-or-feasible members of the
    // main population.
    SubPopulation& main_pop = pops.back();
    if (cfg.use_repair && cfg.repair_top_k > 0) {
        std::vector<double> scores;
        score_population(inst, main_pop, cfg, scores, nullptr);
        std::vector<int> order(main_pop.members.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] < scores[b]; });
        int repaired = 0;
        for (int idx : order) {
            if (repaired >= cfg.repair_top_k) break;
            const BalanceClass cls = classify_balance(inst, main_pop.members[idx]);
            if (cls != BalanceClass::Balanced && cls != BalanceClass::Feasible) continue;
            main_pop.members[idx] =
                repair_hill_climb(inst, std::move(main_pop.members[idx]), main_pop.penalty.weight);
            ++repaired;
            if (trace) ++trace->repairs;
        }
    }

    // Penalty update from each population's new best under its own fitness.
    for (int p = 0; p < pop_count; ++p) {
        SubPopulation& pop = pops[p];
        int best = 0;
        double best_score = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pop.members.size(); ++i) {
            const double s = score_in(inst, pop, pop.members[i], cfg);
            pop.members[i].set_score(s);
            if (s < best_score) {
                best_score = s;
                best = static_cast<int>(i);
            }
        }
        const int q = pop.cumulative ? deficit(inst, pop.members[best]).violated_constraints
                                     : split_violations(inst, pop.members[best], pop.scope);
        pop.penalty = update_penalty(pop.penalty, q);
    }
}

void migrate(std::vector<SubPopulation>& pops, const Instance& inst, const GAConfig& cfg, Rng& rng) {
    const int pop_count = static_cast<int>(pops.size());
    if (pop_count < 2) return;
    for (int src = 0; src < pop_count; ++src) {
        const int member = rng.uniform_int(static_cast<int>(pops[src].members.size()));
        int dst = rng.uniform_int(pop_count - 1);
        if (dst >= src) ++dst;
        SubPopulation& target = pops[dst];
        int worst = 0;
        double worst_score = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < target.members.size(); ++i) {
            const double s = score_in(inst, target, target.members[i], cfg);
            if (s > worst_score) {
                worst_score = s;
                worst = static_cast<int>(i);
            }
        }
        target.members[worst] = pops[src].members[member];
    }
}

RunResult run(const Instance& inst, const GAConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(seed);
    std::vector<SubPopulation> pops = init_populations(inst, cfg, rng);
    SubPopulation& main_pop = pops.back();

    RunResult result;
    bool have_best = false;
    auto consider = [&](const Individual& ind) {
        if (deficit(inst, ind).total_under == 0) {
            const int cost = ind.raw_cost();
            if (!result.feasible || cost < result.best_raw_cost) {
                result.best = ind;
                result.best_raw_cost = cost;
                result.best_penalized = cost;
                result.feasible = true;
                have_best = true;
                return true; // new best-ever feasible cost
            }
        } else if (!result.feasible) {
            const double fitness = penalized_fitness(inst, ind, main_pop.penalty.weight);
            if (!have_best || fitness < result.best_penalized) {
                result.best = ind;
                result.best_penalized = fitness;
                have_best = true;
            }
        }
        return false;
    };
    for (const Individual& ind : main_pop.members) consider(ind);

    double best_score_seen = std::numeric_limits<double>::infinity();
    int stall = 0;
    while (stall < cfg.stall_limit && result.generations < cfg.max_generations) {
        ++result.generations;
        step_generation(pops, inst, cfg, rng);
        if (cfg.use_subpopulations && cfg.migration_interval > 0 &&
            result.generations % cfg.migration_interval == 0) {
            migrate(pops, inst, cfg, rng);
        }

        bool improved = false;
        double generation_best = std::numeric_limits<double>::infinity();
        for (const Individual& ind : main_pop.members) {
            generation_best = std::min(generation_best, score_in(inst, main_pop, ind, cfg));
            if (consider(ind)) improved = true; // new best-ever feasible cost resets the stall
        }
        if (generation_best < best_score_seen - 1e-9) {
            best_score_seen = generation_best;
            improved = true;
        }
        stall = improved ? 0 : stall + 1;
        result.best_score_trace.push_back(generation_best);
    }

    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

namespace {

bool better_result(const RunResult& a, const RunResult& b) {
    if (a.feasible != b.feasible) return a.feasible;
    if (a.feasible && a.best_raw_cost != b.best_raw_cost) return a.best_raw_cost < b.best_raw_cost;
    return a.best_penalized < b.best_penalized;
}

} // namespace

MultiStartResult multi_start(const Instance& inst, const GAConfig& cfg) {
    MultiStartResult out;
    GAConfig run_cfg = cfg;
    for (int r = 0; r < cfg.runs; ++r) {
        if (cfg.escalate_alpha && r > 0 && r % 5 == 0 && out.feasible_runs == 0) {
            run_cfg.alpha *= 2.0;
        }
        RunResult res = run(inst, run_cfg, Rng::derive_seed(cfg.rng_seed, r));
        if (res.feasible) ++out.feasible_runs;
        if (out.runs.empty() || better_result(res, out.best)) out.best = res;
        out.runs.push_back(std::move(res));
    }
    out.final_alpha = run_cfg.alpha;
    return out;
}

BenchSummary bench(const std::vector<BenchInstance>& instances, const GAConfig& cfg, int jobs) {
    cfg.validate();
    struct Job {
        int instance;
        int run_index;
    };
    std::vector<Job> todo;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        for (int r = 0; r < cfg.runs; ++r) todo.push_back({static_cast<int>(i), r});
    }
    std::vector<std::vector<RunResult>> results(instances.size(), std::vector<RunResult>(cfg.runs));

    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(todo.size())));
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t t = cursor.fetch_add(1);
            if (t >= todo.size()) return;
            const Job job = todo[t];
            const std::uint64_t seed =
                Rng::derive_seed(Rng::derive_seed(cfg.rng_seed, job.instance), job.run_index);
            results[job.instance][job.run_index] = run(instances[job.instance].inst, cfg, seed);
        }
    };
    std::vector<std::thread> threads;
    for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
    worker();
    for (std::thread& t : threads) t.join();

    BenchSummary summary;
    std::vector<int> order(instances.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return instances[a].name < instances[b].name; });
    double cost_sum = 0.0;
    int cost_rows = 0;
    for (int i : order) {
        BenchRow row;
        row.name = instances[i].name;
        row.runs = cfg.runs;
        row.has_optimum = instances[i].optimum.has_value();
        double cost_total = 0.0;
        double seconds_total = 0.0;
        for (const RunResult& res : results[i]) {
            seconds_total += res.wall_seconds;
            if (!res.feasible) continue;
            ++row.feasible_runs;
            cost_total += res.best_raw_cost;
            if (row.best_cost < 0 || res.best_raw_cost < row.best_cost) row.best_cost = res.best_raw_cost;
            if (row.has_optimum) {
                if (res.best_raw_cost == *instances[i].optimum) ++row.optimal_runs;
                if (res.best_raw_cost <= *instances[i].optimum + 3) ++row.within3_runs;
            }
        }
        row.mean_feasible_cost = row.feasible_runs > 0 ? cost_total / row.feasible_runs : 0.0;
        row.mean_seconds = seconds_total / cfg.runs;
        summary.total_runs += row.runs;
        summary.total_feasible_runs += row.feasible_runs;
        if (row.feasible_runs > 0) {
            ++summary.instances_with_feasible;
            cost_sum += row.mean_feasible_cost;
            ++cost_rows;
        } else {
            ++summary.instances_all_infeasible;
        }
        summary.rows.push_back(std::move(row));
    }
    summary.mean_feasible_cost = cost_rows > 0 ? cost_sum / cost_rows : 0.0;
    return summary;
}

} // namespace rostering
