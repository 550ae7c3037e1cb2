#include "rostering/instgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "rostering/rng.hpp"

namespace rostering {

void GenSpec::validate() const {
    if (nurses_min < 1 || nurses_max < nurses_min) {
        throw std::invalid_argument("genspec: nurse count range invalid");
    }
    auto sums_to_one = [](const auto& mix) {
        double total = 0.0;
        for (double p : mix) {
            if (p < 0.0) return false;
            total += p;
        }
        return std::abs(total - 1.0) < 1e-9;
    };
    if (!sums_to_one(grade_mix)) throw std::invalid_argument("genspec: grade_mix must sum to 1");
    if (!sums_to_one(contract_mix)) throw std::invalid_argument("genspec: contract_mix must sum to 1");
    if (demand_tightness <= 0.0 || demand_tightness > 1.2) {
        throw std::invalid_argument("genspec: demand_tightness must lie in (0, 1.2]");
    }
}

int sample_cost(CostMode mode, Rng& rng) {
    if (mode == CostMode::UniformRandom) {
        return rng.uniform_int(101);
    }
    const double u = rng.uniform_real();
    return static_cast<int>(100.0 * u * u); // concentrated near 0, tail to 100
}

namespace {

template <std::size_t N>
int sample_mix(const std::array<double, N>& mix, Rng& rng) {
    double u = rng.uniform_real();
    for (std::size_t t = 0; t + 1 < N; ++t) {
        u -= mix[t];
        if (u < 0.0) return static_cast<int>(t);
    }
    return static_cast<int>(N) - 1;
}

} // namespace

Instance generate(const GenSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    RawInstance raw;

    // Shared pattern pool over all contract day/night lengths, ids equal to
    // positions: days in ascending popcount needed, then nights.
    std::array<std::array<int, 8>, 2> pos_of{}; // [day/night][popcount] -> first position
    std::array<std::array<bool, 8>, 2> wanted{};
    for (const WeeklyContract& c : kContracts) {
        wanted[0][c.days_on] = true;
        wanted[1][c.nights_on] = true;
    }
    for (int kind = 0; kind < 2; ++kind) {
        for (int on = 1; on <= 7; ++on) {
            if (!wanted[kind][on]) continue;
            pos_of[kind][on] = static_cast<int>(raw.patterns.size());
            for (std::uint16_t m = 0; m < 128; ++m) {
                if (std::popcount(m) != on) continue;
                const std::uint16_t mask = kind == 0 ? m : static_cast<std::uint16_t>(m << kDaysPerWeek);
                raw.patterns.push_back(ShiftPattern{static_cast<int>(raw.patterns.size()), mask,
                                                    kind == 0 ? PatternKind::Day : PatternKind::Night});
            }
        }
    }
    auto contract_feasible = [&](const WeeklyContract& c) {
        std::vector<int> feasible;
        auto add = [&](int kind, int on) {
            int count = 1;
            for (int t = 0; t < on; ++t) count = count * (7 - t) / (t + 1); // C(7, on)
            for (int t = 0; t < count; ++t) feasible.push_back(pos_of[kind][on] + t);
        };
        add(0, c.days_on);
        add(1, c.nights_on);
        return feasible;
    };

    const int n = spec.nurses_min + rng.uniform_int(spec.nurses_max - spec.nurses_min + 1);
    for (int i = 0; i < n; ++i) {
        Nurse nu;
        nu.id = i;
        nu.grade = 1 + sample_mix(spec.grade_mix, rng);
        nu.feasible = contract_feasible(kContracts[sample_mix(spec.contract_mix, rng)]);
        nu.cost.reserve(nu.feasible.size());
        for (std::size_t t = 0; t < nu.feasible.size(); ++t) {
            nu.cost.push_back(sample_cost(spec.cost_mode, rng));
        }
        raw.nurses.push_back(std::move(nu));
    }

    // Demand: scale the cumulative cover of one sampled assignment. Nights
    // come out lighter than days by construction, since contracts work
    // fewer nights.
    CoverMatrix cumulative{};
    for (const Nurse& nu : raw.nurses) {
        const int j = nu.feasible[rng.uniform_int(static_cast<int>(nu.feasible.size()))];
        std::uint16_t m = raw.patterns[j].mask;
        while (m) {
            const int k = std::countr_zero(m);
            for (int s = nu.grade; s <= kGradeCount; ++s) ++cumulative[k][s - 1];
            m &= static_cast<std::uint16_t>(m - 1);
        }
    }
    for (int k = 0; k < kShiftCount; ++k) {
        for (int s = 0; s < kGradeCount; ++s) {
            // Stochastic rounding keeps the expected demand at exactly
            // tightness x cover while leaving a seeded scatter of slack.
            const double scaled = spec.demand_tightness * cumulative[k][s];
            raw.demand[k][s] = std::max(0, static_cast<int>(std::floor(scaled + rng.uniform_real())));
            if (spec.demand_tightness <= 1.0 && raw.demand[k][s] > n) {
                throw UnsatisfiableSpec("generated demand exceeds workforce at shift " + std::to_string(k + 1));
            }
        }
        for (int s = 1; s < kGradeCount; ++s) {
            raw.demand[k][s] = std::max(raw.demand[k][s], raw.demand[k][s - 1]);
        }
    }

    return Instance::validate(raw);
}

} // namespace rostering
