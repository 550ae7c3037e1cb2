#include "rostering/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "rostering/rng.hpp"

namespace rostering {

namespace {

struct Search {
    const Instance& inst;
    long budget;
    long nodes = 0;

    // Per nurse, feasible patterns sorted by cost so cheap incumbents appear
    // early and the cost bound bites.
    std::vector<std::vector<int>> ordered;
    std::vector<int> min_cost_suffix; // sum of per-nurse minimum costs from i on
    // can_cover[i][k]: nurse i has some feasible pattern covering shift k.
    std::vector<std::array<bool, kShiftCount>> can_cover;
    // max_extra[i][k][s]: upper bound on additional cover at (k, grade<=s)
    // from nurses i..n-1.
    std::vector<std::array<std::array<int, kGradeCount>, kShiftCount>> max_extra;

    std::vector<int> genes;
    CoverMatrix cumulative{}; // cumulative[k][s] = cover at grade s or above
    int acc_cost = 0;

    int best_cost = -1;
    std::vector<int> best_genes;

    explicit Search(const Instance& instance, long node_budget) : inst(instance), budget(node_budget) {
        const int n = inst.nurse_count();
        ordered.resize(n);
        min_cost_suffix.assign(n + 1, 0);
        can_cover.resize(n);
        for (int i = 0; i < n; ++i) {
            ordered[i] = inst.nurse(i).feasible;
            std::sort(ordered[i].begin(), ordered[i].end(), [&](int a, int b) {
                const int ca = inst.cost_of(i, a), cb = inst.cost_of(i, b);
                return ca != cb ? ca < cb : a < b;
            });
            can_cover[i] = {};
            for (int j : ordered[i]) {
                std::uint16_t m = inst.pattern(j).mask;
                while (m) {
                    can_cover[i][std::countr_zero(m)] = true;
                    m &= static_cast<std::uint16_t>(m - 1);
                }
            }
        }
        for (int i = n - 1; i >= 0; --i) {
            min_cost_suffix[i] = min_cost_suffix[i + 1] + inst.cost_of(i, ordered[i].front());
        }
        max_extra.assign(n + 1, {});
        for (int i = n - 1; i >= 0; --i) {
            max_extra[i] = max_extra[i + 1];
            for (int k = 0; k < kShiftCount; ++k) {
                if (!can_cover[i][k]) continue;
                for (int s = inst.grade_of(i); s <= kGradeCount; ++s) {
                    ++max_extra[i][k][s - 1];
                }
            }
        }
        genes.assign(n, -1);
    }

    bool cover_bound_ok(int i) const {
        const DemandMatrix& demand = inst.demand();
        for (int k = 0; k < kShiftCount; ++k) {
            for (int s = 0; s < kGradeCount; ++s) {
                if (cumulative[k][s] + max_extra[i][k][s] < demand[k][s]) return false;
            }
        }
        return true;
    }

    void apply(int i, int j, int direction) {
        const int grade = inst.grade_of(i);
        std::uint16_t m = inst.pattern(j).mask;
        while (m) {
            const int k = std::countr_zero(m);
            for (int s = grade; s <= kGradeCount; ++s) cumulative[k][s - 1] += direction;
            m &= static_cast<std::uint16_t>(m - 1);
        }
        acc_cost += direction * inst.cost_of(i, j);
    }

    void dfs(int i) {
        if (++nodes > budget) throw BudgetExceeded(nodes - 1);
        if (i == inst.nurse_count()) {
            // cover_bound_ok with no nurses left is exact, so this is feasible.
            if (best_cost < 0 || acc_cost < best_cost) {
                best_cost = acc_cost;
                best_genes = genes;
            }
            return;
        }
        for (int j : ordered[i]) {
            if (best_cost >= 0 && acc_cost + inst.cost_of(i, j) + min_cost_suffix[i + 1] >= best_cost) {
                break; // ordered by cost: nothing cheaper follows
            }
            genes[i] = j;
            apply(i, j, +1);
            if (cover_bound_ok(i + 1)) dfs(i + 1);
            apply(i, j, -1);
            genes[i] = -1;
        }
    }
};

} // namespace

OracleResult exact_solve(const Instance& inst, long node_budget) {
    Search search(inst, node_budget);
    if (search.cover_bound_ok(0)) {
        search.dfs(0);
    }
    OracleResult result;
    result.nodes_explored = search.nodes;
    if (search.best_cost >= 0) {
        result.status = OracleStatus::Optimal;
        result.best_cost = search.best_cost;
        result.best_genes = std::move(search.best_genes);
    }
    return result;
}

namespace {

// Grade layouts before sorting; validation re-sorts into blocks.
constexpr std::array<int, 5> kGradesFive = {2, 1, 2, 3, 3};
constexpr std::array<int, 6> kGradesSix = {3, 2, 1, 2, 3, 3};

struct Contract {
    int days_on;
    int nights_on;
};
constexpr std::array<Contract, 2> kMicroContracts = {{{3, 2}, {4, 3}}};

Instance build_micro(std::uint64_t seed, bool stress) {
    Rng rng(seed);
    RawInstance raw;

    // Pattern pool: union over the micro contracts, ids equal to positions.
    std::vector<std::vector<int>> contract_patterns(kMicroContracts.size());
    for (std::size_t c = 0; c < kMicroContracts.size(); ++c) {
        for (const ShiftPattern& p : enumerate_patterns(kMicroContracts[c].days_on, kMicroContracts[c].nights_on)) {
            int pos = -1;
            for (std::size_t t = 0; t < raw.patterns.size(); ++t) {
                if (raw.patterns[t].mask == p.mask) {
                    pos = static_cast<int>(t);
                    break;
                }
            }
            if (pos < 0) {
                pos = static_cast<int>(raw.patterns.size());
                raw.patterns.push_back(ShiftPattern{pos, p.mask, p.kind});
            }
            contract_patterns[c].push_back(pos);
        }
    }

    const bool six = seed != 0 && (Rng::derive_seed(seed, 17) & 1u);
    const int n = six ? 6 : 5;
    for (int i = 0; i < n; ++i) {
        Nurse nu;
        nu.id = i;
        nu.grade = six ? kGradesSix[i] : kGradesFive[i];
        const auto& pool = contract_patterns[rng.uniform_int(static_cast<int>(kMicroContracts.size()))];
        const int want = 4 + rng.uniform_int(5); // 4..8 patterns
        std::vector<int> candidates = pool;
        for (int t = 0; t < want; ++t) {
            std::swap(candidates[t], candidates[t + rng.uniform_int(static_cast<int>(candidates.size()) - t)]);
        }
        candidates.resize(want);
        std::sort(candidates.begin(), candidates.end());
        nu.feasible = candidates;
        for (std::size_t t = 0; t < nu.feasible.size(); ++t) {
            const double u = rng.uniform_real();
            nu.cost.push_back(static_cast<int>(100.0 * u * u)); // bias to low values
        }
        raw.nurses.push_back(std::move(nu));
    }

    // Demand from a sampled reference assignment, so the instance is
    // feasible by construction; at least four shifts kept fully tight.
    CoverMatrix exact{};
    for (int i = 0; i < n; ++i) {
        const auto& feas = raw.nurses[i].feasible;
        const int j = feas[rng.uniform_int(static_cast<int>(feas.size()))];
        std::uint16_t m = raw.patterns[j].mask;
        while (m) {
            ++exact[std::countr_zero(m)][raw.nurses[i].grade - 1];
            m &= static_cast<std::uint16_t>(m - 1);
        }
    }
    CoverMatrix cumulative{};
    for (int k = 0; k < kShiftCount; ++k) {
        int acc = 0;
        for (int s = 0; s < kGradeCount; ++s) {
            acc += exact[k][s];
            cumulative[k][s] = acc;
        }
    }
    std::vector<int> covered;
    for (int k = 0; k < kShiftCount; ++k) {
        if (cumulative[k][kGradeCount - 1] > 0) covered.push_back(k);
    }
    const int tight_count = std::min<int>(4 + rng.uniform_int(3), static_cast<int>(covered.size()));
    for (int t = 0; t < tight_count; ++t) {
        std::swap(covered[t], covered[t + rng.uniform_int(static_cast<int>(covered.size()) - t)]);
    }
    for (int k = 0; k < kShiftCount; ++k) {
        const bool tight = std::find(covered.begin(), covered.begin() + tight_count, k) != covered.begin() + tight_count;
        const int slack = tight ? 0 : 1 + rng.uniform_int(2);
        for (int s = 0; s < kGradeCount; ++s) {
            raw.demand[k][s] = std::max(cumulative[k][s] - slack, 0);
        }
    }
    if (stress) {
        // +2 everywhere exceeds what the single grade-1 nurse can supply at
        // grade 1, so no assignment covers.
        for (int k = 0; k < kShiftCount; ++k) {
            for (int s = 0; s < kGradeCount; ++s) raw.demand[k][s] += 2;
        }
    }
    return Instance::validate(raw);
}

} // namespace

Instance micro_a() { return build_micro(0, false); }

Instance micro_b() { return build_micro(0, true); }

Instance micro_variant(std::uint64_t seed, bool stress) { return build_micro(seed, stress); }

std::vector<std::pair<std::string, Instance>> micro_suite(int count, std::uint64_t base_seed, int infeasible_every) {
    std::vector<std::pair<std::string, Instance>> suite;
    suite.reserve(count);
    for (int t = 0; t < count; ++t) {
        const bool stress = infeasible_every > 0 && (t + 1) % infeasible_every == 0;
        std::string name = "micro-" + std::to_string(t) + (stress ? "-stress" : "");
        suite.emplace_back(std::move(name), micro_variant(Rng::derive_seed(base_seed, t), stress));
    }
    return suite;
}

} // namespace rostering
