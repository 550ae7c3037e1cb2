#include "rostering/fitness.hpp"

#include <algorithm>
#include <numeric>

namespace rostering {

PenaltyState update_penalty(PenaltyState state, int best_q) {
    state.best_violations = best_q;
    state.weight = best_q > 0 ? state.alpha * best_q : state.floor_v;
    return state;
}

double penalized_fitness(const Instance& inst, const Individual& ind, double weight) {
    const Deficit d = deficit(inst, ind);
    return static_cast<double>(ind.raw_cost()) + weight * d.total_under;
}

double sub_fitness(const Instance& inst, const Individual& ind, GradeScope scope, double weight) {
    double cost = 0.0;
    int under = 0;
    const CoverMatrix& cover = ind.cover();
    const DemandMatrix& split = inst.split().s;
    for (int g = 1; g <= kGradeCount; ++g) {
        if (!scope.contains(g)) continue;
        cost += ind.raw_cost_of_grade(g);
        for (int k = 0; k < kShiftCount; ++k) {
            under += std::max(split[k][g - 1] - cover[k][g - 1], 0);
        }
    }
    return cost + weight * under;
}

int split_violations(const Instance& inst, const Individual& ind, GradeScope scope) {
    int q = 0;
    const CoverMatrix& cover = ind.cover();
    const DemandMatrix& split = inst.split().s;
    for (int g = 1; g <= kGradeCount; ++g) {
        if (!scope.contains(g)) continue;
        for (int k = 0; k < kShiftCount; ++k) {
            if (split[k][g - 1] > cover[k][g - 1]) ++q;
        }
    }
    return q;
}

namespace {

struct GroupTally {
    int under_total = 0;
    int over_total = 0;
    bool exact = true; // every shift in the group exactly covered

    void add(int o) {
        if (o < 0) under_total -= o;
        if (o > 0) over_total += o;
        if (o != 0) exact = false;
    }
};

} // namespace

BalanceClass classify_overcover(std::span<const int, kShiftCount> o) {
    GroupTally days, nights;
    for (int k = 0; k < kDaysPerWeek; ++k) days.add(o[k]);
    for (int k = kDaysPerWeek; k < kShiftCount; ++k) nights.add(o[k]);

    if (days.under_total == 0 && nights.under_total == 0) return BalanceClass::Feasible;

    auto balanced_pair = [](const GroupTally& perfect, const GroupTally& rest) {
        return perfect.exact && rest.under_total > 0 && rest.over_total > 0 &&
               rest.over_total >= rest.under_total;
    };
    if (balanced_pair(days, nights) || balanced_pair(nights, days)) return BalanceClass::Balanced;

    const int groups_with_over = (days.over_total > 0 ? 1 : 0) + (nights.over_total > 0 ? 1 : 0);
    auto compensated = [](const GroupTally& g) {
        return g.under_total > 0 && g.over_total > 0 && g.over_total >= g.under_total;
    };
    if (groups_with_over <= 1 && !compensated(days) && !compensated(nights)) {
        return BalanceClass::Unbalanced;
    }
    return BalanceClass::Undecided;
}

BalanceClass classify_balance(const Instance& inst, const Individual& ind) {
    std::array<int, kShiftCount> o{};
    const CoverMatrix& cover = ind.cover();
    const DemandMatrix& demand = inst.demand();
    for (int k = 0; k < kShiftCount; ++k) {
        o[k] = cover[k][0] + cover[k][1] + cover[k][2] - demand[k][kGradeCount - 1];
    }
    return classify_overcover(o);
}

double adjusted_score(const Instance& inst, const Individual& ind, double weight, double incentive_factor) {
    const double fitness = penalized_fitness(inst, ind, weight);
    switch (classify_balance(inst, ind)) {
    case BalanceClass::Balanced:
        return fitness - incentive_factor * weight;
    case BalanceClass::Unbalanced:
        return fitness + incentive_factor * weight;
    default:
        return fitness;
    }
}

Ranking rank_population(std::span<const double> scores) {
    const int n = static_cast<int>(scores.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] < scores[b]; });

    Ranking out;
    out.rank.resize(n);
    out.weight.resize(n);
    const double total = 0.5 * n * (n + 1);
    for (int r = 0; r < n; ++r) {
        out.rank[order[r]] = r + 1;
        out.weight[order[r]] = (n - r) / total;
    }
    return out;
}

RankSampler::RankSampler(std::span<const double> scores) {
    const int n = static_cast<int>(scores.size());
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return scores[a] < scores[b]; });
    cum_.resize(n);
    long acc = 0;
    for (int t = 0; t < n; ++t) {
        acc += n - t;
        cum_[t] = acc;
    }
}

int RankSampler::draw(Rng& rng) const {
    const long x = static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(cum_.back()));
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), x);
    return order_[static_cast<std::size_t>(it - cum_.begin())];
}

} // namespace rostering
