#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rostering/fitness.hpp"
#include "rostering/model.hpp"
#include "rostering/rng.hpp"

namespace rostering {

// Per-nurse crossover mask, length n. 1 copies from the first parent.
using CrossoverMask = std::vector<std::uint8_t>;

CrossoverMask random_mask(int n, Rng& rng);

Individual uniform_crossover(const Instance& inst, const Individual& a, const Individual& b,
                             const CrossoverMask& mask);

// Assigns each grade block to one of the supplied parents; the child copies
// whole blocks so grade-level building blocks survive intact.
using GradeCutPlan = std::array<int, kGradeCount>; // block (grade-1) -> parent slot

struct ScopeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

Individual grade_crossover(const Instance& inst, std::span<const Individual* const> parents,
                           const GradeCutPlan& plan);

// Re-assigns one uniformly chosen nurse to a uniformly chosen different
// pattern from her feasible set (no-op when the set is a singleton).
void mutate(const Instance& inst, Individual& ind, Rng& rng);

// First-improvement pattern-swap descent: cycles nurses in index order,
// trying each feasible pattern and accepting any swap that strictly lowers
// the penalized fitness; stops after a full pass without an acceptance.
// Acceptance deliberately ignores the balance bonus: under a fixed balance
// class this equals descent on the incentive-adjusted score, and it lets a
// balanced solution step across into feasibility instead of clinging to the
// bonus. Deterministic given its input.
Individual repair_hill_climb(const Instance& inst, Individual ind, double weight);

} // namespace rostering
