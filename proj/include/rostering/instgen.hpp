#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "rostering/model.hpp"

namespace rostering {

enum class CostMode { BiasedLow, UniformRandom };

// Contracts offered to generated nurses: (days on, nights on).
struct WeeklyContract {
    int days_on;
    int nights_on;
};
// Full time plus the common part-time options.
inline constexpr std::array<WeeklyContract, 4> kContracts = {{{5, 4}, {4, 3}, {3, 3}, {3, 2}}};

struct UnsatisfiableSpec : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenSpec {
    int nurses_min = 20;
    int nurses_max = 30;
    std::array<double, kGradeCount> grade_mix = {0.2, 0.3, 0.5};
    std::array<double, 4> contract_mix = {0.4, 0.2, 0.2, 0.2}; // aligned with kContracts
    // Fraction of the cover a full workforce assignment delivers that is
    // demanded. At 1.0 demand pins a reference assignment exactly; above 1.0
    // instances are deliberately infeasible stress cases.
    double demand_tightness = 0.9;
    CostMode cost_mode = CostMode::BiasedLow;
    std::uint64_t seed = 1;

    void validate() const; // throws std::invalid_argument
};

// Builds a ward-shaped instance: contracts sampled per contract_mix, the
// feasible set of each nurse being every pattern of her contract, costs per
// cost_mode, and demand scaled from a sampled reference assignment (which
// therefore witnesses feasibility whenever demand_tightness <= 1).
// Deterministic per spec.seed.
Instance generate(const GenSpec& spec);

int sample_cost(CostMode mode, Rng& rng);

} // namespace rostering
