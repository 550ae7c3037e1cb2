#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rostering/model.hpp"
#include "rostering/rng.hpp"

namespace rostering {

// Adaptive penalty weight per population: alpha * q while the population's
// best individual violates q > 0 cover constraints, floor_v once feasible.
struct PenaltyState {
    double weight = 10.0; // initial demand weight before the first update
    double alpha = 8.0;
    double floor_v = 5.0;
    int best_violations = -1; // -1 until first update
};

PenaltyState update_penalty(PenaltyState state, int best_q);

enum class BalanceClass { Feasible, Balanced, Unbalanced, Undecided };

// Non-empty subset of the grades {1,2,3}.
struct GradeScope {
    std::uint8_t bits = 0; // bit (g-1) set <=> grade g in scope

    bool contains(int grade) const { return (bits >> (grade - 1)) & 1u; }

    static constexpr GradeScope of_grade(int g) { return {static_cast<std::uint8_t>(1u << (g - 1))}; }
    static constexpr GradeScope of_grades(int g1, int g2) {
        return {static_cast<std::uint8_t>((1u << (g1 - 1)) | (1u << (g2 - 1)))};
    }
    static constexpr GradeScope all() { return {0x7}; }

    bool operator==(const GradeScope&) const = default;
};

// Raw preference cost plus weight times total under-cover.
double penalized_fitness(const Instance& inst, const Individual& ind, double weight);

// Grade-scoped fitness: preference cost of in-scope nurses plus weight times
// the split-demand shortfalls at the in-scope grades. Uses exact-grade cover
// and the grade-exclusive demand, so higher grades do not substitute here.
double sub_fitness(const Instance& inst, const Individual& ind, GradeScope scope, double weight);

// Number of (shift, grade) pairs with a positive split-demand shortfall
// inside scope; the q fed to a sub-population's penalty update.
int split_violations(const Instance& inst, const Individual& ind, GradeScope scope);

// Classification of the per-shift total over-cover o_k (cover at grade 3
// cumulative minus total demand):
//  - Feasible:   no shift under-covered.
//  - Balanced:   one shift group (days or nights) covered exactly, the other
//                has both under- and over-cover with enough over to
//                compensate. Repairable by single-nurse pattern changes.
//  - Unbalanced: under-cover that cannot be compensated within its group;
//                at most one group over-covered.
//  - Undecided:  anything else.
BalanceClass classify_overcover(std::span<const int, kShiftCount> overcover);
BalanceClass classify_balance(const Instance& inst, const Individual& ind);

// Penalized fitness with a rank bonus for balanced solutions and a malus for
// unbalanced ones, each incentive_factor times the current penalty weight.
double adjusted_score(const Instance& inst, const Individual& ind, double weight, double incentive_factor);

struct Ranking {
    std::vector<int> rank;      // rank[i] in 1..N, 1 = best (lowest score)
    std::vector<double> weight; // normalized linear selection weights
};

// Linear rank weights w(r) = N - r + 1; ties broken by index order.
Ranking rank_population(std::span<const double> scores);

// Draws indices with probability proportional to the linear rank weight.
class RankSampler {
public:
    RankSampler() = default;
    explicit RankSampler(std::span<const double> scores);

    int draw(Rng& rng) const;
    int best() const { return order_.front(); }

private:
    std::vector<int> order_;
    std::vector<long> cum_;
};

} // namespace rostering
