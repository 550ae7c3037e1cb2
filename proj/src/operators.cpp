#include "rostering/operators.hpp"

namespace rostering {

CrossoverMask random_mask(int n, Rng& rng) {
    CrossoverMask mask(n);
    for (int i = 0; i < n; ++i) {
        mask[i] = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    }
    return mask;
}

Individual uniform_crossover(const Instance& inst, const Individual& a, const Individual& b,
                             const CrossoverMask& mask) {
    std::vector<int> genes(a.size());
    for (int i = 0; i < a.size(); ++i) {
        genes[i] = mask[i] ? a.gene(i) : b.gene(i);
    }
    return Individual(inst, std::move(genes));
}

Individual grade_crossover(const Instance& inst, std::span<const Individual* const> parents,
                           const GradeCutPlan& plan) {
    std::vector<int> genes(inst.nurse_count());
    for (int g = 1; g <= kGradeCount; ++g) {
        const int slot = plan[g - 1];
        if (slot < 0 || slot >= static_cast<int>(parents.size()) || parents[slot] == nullptr) {
            throw ScopeMismatch("grade_crossover: block " + std::to_string(g) +
                                " assigned to missing parent slot " + std::to_string(slot));
        }
        const Individual& parent = *parents[slot];
        for (int i = inst.grade_begin(g); i < inst.grade_end(g); ++i) {
            genes[i] = parent.gene(i);
        }
    }
    return Individual(inst, std::move(genes));
}

void mutate(const Instance& inst, Individual& ind, Rng& rng) {
    const int i = rng.uniform_int(ind.size());
    const auto& feas = inst.nurse(i).feasible;
    if (feas.size() < 2) return;
    // Draw from F(i) minus the current pattern by skipping over it.
    int pick = rng.uniform_int(static_cast<int>(feas.size()) - 1);
    if (feas[pick] == ind.gene(i)) pick = static_cast<int>(feas.size()) - 1;
    ind.set_gene(inst, i, feas[pick]);
}

Individual repair_hill_climb(const Instance& inst, Individual ind, double weight) {
    double current = penalized_fitness(inst, ind, weight);
    bool accepted_any = true;
    while (accepted_any) {
        accepted_any = false;
        for (int i = 0; i < ind.size(); ++i) {
            const auto& feas = inst.nurse(i).feasible;
            for (int candidate : feas) {
                if (candidate == ind.gene(i)) continue;
                const int before = ind.gene(i);
                ind.set_gene(inst, i, candidate);
                const double trial = penalized_fitness(inst, ind, weight);
                if (trial < current) {
                    current = trial;
                    accepted_any = true;
                } else {
                    ind.set_gene(inst, i, before);
                }
            }
        }
    }
    return ind;
}

} // namespace rostering
